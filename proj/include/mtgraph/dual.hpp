#pragma once
/// \file dual.hpp
/// The characteristic (dual) equation c_i e^{-(kappa c)_i} = mu_i e^{-(kappa mu)_i}.
/// Its minimal solution c encodes the per-type mass of vertices outside the
/// giant component: c = mu when the model is subcritical, c < mu strictly
/// when supercritical.  Solved by the monotone fixed-point map
/// F(c) = mu .* exp(-kappa (mu - c)) from c = 0, whose iterates increase
/// coordinatewise to the minimal fixed point, plus a guarded Newton polish.

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "mtgraph/common.hpp"
#include "mtgraph/model.hpp"

namespace mtg {

struct DualSolution {
  Eigen::VectorXd c;
  double q = 0.0;          // |c| - <c, kappa c>/2: limiting components per vertex
  double residual = 0.0;   // max_i |c_i e^{-(kappa c)_i} - mu_i e^{-(kappa mu)_i}|
  int iterations = 0;
  bool is_trivial = false;  // c = mu (subcritical)
  bool near_critical = false;

  Eigen::VectorXd survival;  // per-type survival probability 1 - c_i/mu_i
};

namespace detail {

inline double dual_residual(const Model& m, const Eigen::VectorXd& c) {
  Eigen::VectorXd lhs = c.array() * (-(m.kappa() * c).array()).exp();
  Eigen::VectorXd rhs = m.mu().array() * (-(m.kappa() * m.mu()).array()).exp();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace detail

inline DualSolution solve_dual(const Model& m, double tol = 1e-15, long long max_iter = 2000000) {
  const int S = m.S();
  const Eigen::MatrixXd& kap = m.kappa();
  const Eigen::VectorXd& mu = m.mu();

  DualSolution sol;
  double sig = sigma(m);
  sol.near_critical = std::abs(sig - 1.0) <= 1e-6;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(S);
  auto F = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return mu.array() * (-(kap * (mu - x)).array()).exp();
  };

  long long it = 0;
  for (; it < max_iter; ++it) {
    Eigen::VectorXd next = F(c);
    // the iteration is provably monotone; a decrease flags a numerics bug
    if (((next - c).array() < -1e-13).any())
      throw NumericalError("MonotonicityLost", "dual iteration decreased a coordinate");
    double step = (next - c).cwiseAbs().maxCoeff();
    c = next;
    if (step < tol) break;
  }
  if (it >= max_iter)
    throw NumericalError("NoConvergence", "dual fixed-point iteration hit the cap at " +
                                              std::to_string(max_iter) + " steps");

  // Newton polish on G(c) = c - F(c); Jacobian I - D_{F(c)} kappa.
  // Kept only while it improves the residual (it can overshoot near mu).
  double res = detail::dual_residual(m, c);
  for (int polish = 0; polish < 3; ++polish) {
    Eigen::VectorXd fc = F(c);
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(S, S) - fc.asDiagonal() * kap;
    Eigen::VectorXd delta = J.partialPivLu().solve(fc - c);
    Eigen::VectorXd cand = c + delta;
    bool in_range = true;
    for (int i = 0; i < S; ++i)
      if (!(cand(i) > 0.0) || cand(i) > mu(i) * (1.0 + 1e-12)) in_range = false;
    if (!in_range) break;
    double cres = detail::dual_residual(m, cand);
    if (cres >= res) break;
    c = cand.cwiseMin(mu);
    res = cres;
  }

  sol.c = c;
  sol.iterations = static_cast<int>(it);
  sol.residual = res;
  sol.is_trivial = (mu - c).cwiseAbs().maxCoeff() <= 1e-9 * mu.maxCoeff();
  if (sol.is_trivial) {
    sol.c = mu;  // snap: subcritical solution is exactly mu
    sol.residual = 0.0;
  }
  sol.q = sol.c.sum() - 0.5 * sol.c.dot(kap * sol.c);
  sol.survival = Eigen::VectorXd::Ones(S) - (sol.c.array() / mu.array()).matrix();
  return sol;
}

}  // namespace mtg
