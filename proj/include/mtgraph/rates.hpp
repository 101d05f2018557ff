#pragma once
/// \file rates.hpp
/// Moderate-deviation rate functions for the component structure, and the
/// covariance predictions they encode (each rate is a quadratic x^T H x / 2
/// whose Hessian H is the inverse of the corresponding fluctuation
/// covariance).
///
/// Supercritical quantities are built around the matrices
///   v_i   = mu_i / (c_i (mu_i - c_i)),
///   A     = sym( (I - kappa D_c) D_{mu-c}^{-1} (I - D_mu kappa) ),
///   B     = (Phi - c c^T / q)^{-1},
///   B_k   = (Phi - k k^T h(k))^{-1},
/// with Phi the second-moment matrix of the cluster expansion.  At or below
/// criticality c = mu and the giant-component rates are undefined; the
/// per-shape and component-count rates then take their simpler forms.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "mtgraph/common.hpp"
#include "mtgraph/cpp_law.hpp"
#include "mtgraph/dual.hpp"
#include "mtgraph/model.hpp"
#include "mtgraph/tree.hpp"
#include "mtgraph/typevec.hpp"

namespace mtg {

namespace detail {

/// Positive definite by symmetric eigenvalues, with a relative floor.
inline bool is_pd(const Eigen::MatrixXd& M, double rel_floor = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  return lo > rel_floor * std::max(hi, 1e-300);
}

}  // namespace detail

struct RateContext {
  Model model;
  DualSolution dual;
  Eigen::MatrixXd phi;            // second-moment matrix of the cluster law
  Eigen::MatrixXd phi_inv;        // D_c^{-1} - kappa
  Eigen::MatrixXd A;              // symmetrized giant/small coupling matrix
  Eigen::MatrixXd B;              // (Phi - c c^T / q)^{-1}
  Eigen::MatrixXd giant_cov;      // predicted covariance of the giant fluctuation
  Eigen::MatrixXd giant_cov_inv;  // (I - kappa D_c) D_v (I - D_c kappa)
  Eigen::VectorXd v;              // mu_i / (c_i (mu_i - c_i))
};

/// Assemble the supercritical rate-function context.  Verifies the
/// positive-definiteness lemmas and the rank-one determinant identity
/// det(I - Phi^{-1} c c^T / q) = <c, kappa c> / (2 q).
inline RateContext build_rate_context(const Model& model) {
  RateContext ctx;
  ctx.model = model;
  ctx.dual = solve_dual(model);
  if (ctx.dual.is_trivial)
    throw ValidationError("NotSupercritical",
                          "rate-function context needs a nontrivial dual solution");
  const int S = model.S();
  const Eigen::VectorXd& mu = model.mu();
  const Eigen::VectorXd& c = ctx.dual.c;
  const Eigen::MatrixXd& kappa = model.kappa();
  const double q = ctx.dual.q;

  ctx.phi = phi_closed(model, ctx.dual);
  ctx.phi_inv = Eigen::MatrixXd(c.cwiseInverse().asDiagonal()) - kappa;

  ctx.v = Eigen::VectorXd(S);
  for (int s = 0; s < S; ++s) {
    double gap = mu[s] - c[s];
    if (!(gap > 0.0) || !(c[s] > 0.0))
      throw NumericalError("PDViolation", "dual solution leaves no giant mass in some type");
    ctx.v[s] = mu[s] / (c[s] * gap);
  }

  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(S, S);
  Eigen::MatrixXd A0 = (I - kappa * c.asDiagonal()) *
                       Eigen::MatrixXd((mu - c).cwiseInverse().asDiagonal()) *
                       (I - Eigen::MatrixXd(mu.asDiagonal()) * kappa);
  ctx.A = 0.5 * (A0 + A0.transpose());

  Eigen::MatrixXd Binv = ctx.phi - (c * c.transpose()) / q;
  if (!detail::is_pd(Binv))
    throw NumericalError("PDViolation", "Phi - c c^T/q is not positive definite");
  ctx.B = Binv.inverse();

  ctx.giant_cov_inv =
      (I - kappa * c.asDiagonal()) * ctx.v.asDiagonal() * (I - c.asDiagonal() * kappa);
  if (!detail::is_pd(ctx.giant_cov_inv))
    throw NumericalError("PDViolation", "giant fluctuation quadratic form is not PD");
  ctx.giant_cov = ctx.giant_cov_inv.inverse();

  if (!detail::is_pd(ctx.A + ctx.B))
    throw NumericalError("PDViolation", "A + B is not positive definite");

  // rank-one determinant identity tying Phi, c, and q together
  Eigen::MatrixXd M = I - ctx.phi_inv * (c * c.transpose()) / q;
  double lhs = M.determinant();
  double rhs = 0.5 * c.dot(kappa * c) / q;
  MTG_ASSERT(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)),
             "rank-one determinant identity violated");
  return ctx;
}

/// Per-shape context: the rank-one-corrected matrix B_k and the
/// positive-definiteness condition for A + B_k.
struct KRateContext {
  TypeVec k;
  double h = 0.0;               // cluster weight h(k)
  Eigen::MatrixXd Bk;           // (Phi - k k^T h)^{-1}
  bool bk_pd = false;           // Phi - k k^T h is PD
  bool apbk_pd = false;         // A + B_k is PD
  bool pd_condition = false;    // k^T (D_mu^{-1} - kappa) k h(k) < 1
};

inline KRateContext build_k_context(const RateContext& ctx, const TypeVec& k) {
  const int S = ctx.model.S();
  if (static_cast<int>(k.size()) != S)
    throw ValidationError("BadArgument", "type vector length mismatch");
  KRateContext kc;
  kc.k = k;
  kc.h = h_value(k, ctx.model, ctx.dual).h;
  if (!(kc.h > 0.0)) throw NumericalError("PDViolation", "cluster weight h(k) underflowed");
  Eigen::VectorXd kv(S);
  for (int s = 0; s < S; ++s) kv[s] = static_cast<double>(k[s]);
  Eigen::MatrixXd Bkinv = ctx.phi - (kv * kv.transpose()) * kc.h;
  kc.bk_pd = detail::is_pd(Bkinv);
  if (kc.bk_pd) {
    kc.Bk = Bkinv.inverse();
    kc.apbk_pd = detail::is_pd(ctx.A + kc.Bk);
  }
  Eigen::MatrixXd D = Eigen::MatrixXd(ctx.model.mu().cwiseInverse().asDiagonal()) -
                      ctx.model.kappa();
  kc.pd_condition = kv.dot(D * kv) * kc.h < 1.0;
  // the analytic sufficient condition must never contradict the numerics
  if (kc.pd_condition)
    MTG_ASSERT(kc.bk_pd && kc.apbk_pd, "PD condition met but A + B_k found indefinite");
  return kc;
}

/// Rate of an O(x sqrt(n)) deviation in the count of k-components around
/// its supercritical mean: J_k(x) = x^2/2 (1/h(k) + k^T A (A+B_k)^{-1} B_k k).
inline double rate_J(const RateContext& ctx, const KRateContext& kc, double x) {
  if (!kc.bk_pd || !kc.apbk_pd)
    throw NumericalError("PDViolation", "A + B_k must be positive definite for this rate");
  const int S = ctx.model.S();
  Eigen::VectorXd kv(S);
  for (int s = 0; s < S; ++s) kv[s] = static_cast<double>(kc.k[s]);
  Eigen::MatrixXd mid = ctx.A * (ctx.A + kc.Bk).inverse() * kc.Bk;
  double coef = 1.0 / kc.h + kv.dot(0.5 * (mid + mid.transpose()) * kv);
  if (!(coef > 0.0))
    throw NumericalError("NegativeRateCoefficient", "per-shape rate coefficient must be > 0");
  return 0.5 * coef * x * x;
}

/// The same deviation rate at or below criticality (no giant):
/// J'_k(x) = x^2/2 (1/h(k) + k^T (Phi - k k^T h(k))^{-1} k).
inline double rate_J_sub(const Model& model, const DualSolution& dual, const TypeVec& k,
                         double x) {
  const int S = model.S();
  if (static_cast<int>(k.size()) != S)
    throw ValidationError("BadArgument", "type vector length mismatch");
  double h = h_value(k, model, dual).h;
  if (!(h > 0.0)) throw NumericalError("PDViolation", "cluster weight h(k) underflowed");
  Eigen::VectorXd kv(S);
  for (int s = 0; s < S; ++s) kv[s] = static_cast<double>(k[s]);
  Eigen::MatrixXd phi = phi_closed(model, dual);
  Eigen::MatrixXd Bkinv = phi - (kv * kv.transpose()) * h;
  if (!detail::is_pd(Bkinv))
    throw NumericalError("PDViolation", "Phi - k k^T h is not positive definite");
  double coef = 1.0 / h + kv.dot(Bkinv.inverse() * kv);
  if (!(coef > 0.0))
    throw NumericalError("NegativeRateCoefficient", "per-shape rate coefficient must be > 0");
  return 0.5 * coef * x * x;
}

/// Rate of an O(sqrt(n)) deviation of the giant component's type profile:
/// I(x) = <(I - D_c kappa) x, D_v (I - D_c kappa) x> / 2.
inline double rate_I(const RateContext& ctx, const Eigen::VectorXd& x) {
  if (x.size() != ctx.model.S())
    throw ValidationError("BadArgument", "deviation vector length mismatch");
  return 0.5 * x.dot(ctx.giant_cov_inv * x);
}

/// Rate for the total number of components, supercritical:
/// i(x) = x^2/(2q) + (x/q)^2 <c, A (A+B)^{-1} B c> / 2.
inline double rate_i(const RateContext& ctx, double x) {
  const double q = ctx.dual.q;
  Eigen::MatrixXd mid = ctx.A * (ctx.A + ctx.B).inverse() * ctx.B;
  double corr = ctx.dual.c.dot(0.5 * (mid + mid.transpose()) * ctx.dual.c);
  double coef = 1.0 / q + corr / (q * q);
  if (!(coef > 0.0))
    throw NumericalError("NegativeRateCoefficient", "component-count rate must be > 0");
  return 0.5 * coef * x * x;
}

/// Rate for the total number of components at or below criticality, where
/// the component-count fluctuation is driven by the edge count alone:
/// i'(x) = x^2 / <mu, kappa mu>.
inline double rate_i_sub(const Model& model, double x) {
  double denom = model.mu().dot(model.kappa() * model.mu());
  if (!(denom > 0.0))
    throw NumericalError("NegativeRateCoefficient", "kernel mass <mu, kappa mu> must be > 0");
  return x * x / denom;
}

/// The three elementary quadratic forms of the cluster calculus.
inline double rate_j1(const RateContext& ctx, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(ctx.phi_inv * x);
}
inline double rate_j2(const RateContext& ctx, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(ctx.B * x);
}
inline double rate_j3([[maybe_unused]] const RateContext& ctx, const KRateContext& kc,
                      const Eigen::VectorXd& x) {
  if (!kc.bk_pd) throw NumericalError("PDViolation", "Phi - k k^T h is not positive definite");
  return 0.5 * x.dot(kc.Bk * x);
}

struct CovariancePrediction {
  Eigen::MatrixXd giant_cov;     // covariance of (giant counts - n(mu-c))/sqrt(n)
  double var_components = 0.0;   // variance of (#components - n q)/sqrt(n)
  bool supercritical = false;
};

/// Predicted fluctuation covariances: the inverse Hessians of the rates.
inline CovariancePrediction predicted_covariances(const Model& model) {
  CovariancePrediction pred;
  DualSolution dual = solve_dual(model);
  if (!dual.is_trivial) {
    RateContext ctx = build_rate_context(model);
    pred.giant_cov = ctx.giant_cov;
    pred.var_components = 1.0 / (2.0 * rate_i(ctx, 1.0));
    pred.supercritical = true;
  } else {
    pred.giant_cov = Eigen::MatrixXd::Zero(model.S(), model.S());
    pred.var_components = 1.0 / (2.0 * rate_i_sub(model, 1.0));
    pred.supercritical = false;
  }
  return pred;
}

/// Predicted variance of the normalized count of k-components,
/// (count - n h(k)/ factor)/sqrt(n): the reciprocal of the rate coefficient.
inline double predicted_var_t(const Model& model, const TypeVec& k) {
  DualSolution dual = solve_dual(model);
  if (!dual.is_trivial) {
    RateContext ctx = build_rate_context(model);
    KRateContext kc = build_k_context(ctx, k);
    return 1.0 / (2.0 * rate_J(ctx, kc, 1.0));
  }
  return 1.0 / (2.0 * rate_J_sub(model, dual, k, 1.0));
}

/// Central-difference Hessian of a scalar function of a vector argument.
template <class F>
inline Eigen::MatrixXd fd_hessian(F&& f, int S, double step = 1e-4) {
  Eigen::MatrixXd H(S, S);
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(S);
      e[i] += step;
      e[j] += step;
      double fpp = f(e);
      e[j] -= 2 * step;
      double fpm = f(e);
      e[i] -= 2 * step;
      double fmm = f(e);
      e[j] += 2 * step;
      double fmp = f(e);
      H(i, j) = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
    }
  return H;
}

struct CgfReport {
  double a_n = 0.0;              // deviation scale n^{theta_exp}
  double poisson_empirical = 0.0;  // (lambda n (M(t)-1) - a sqrt(n) lambda <z,m>) / a^2
  double poisson_target = 0.0;     // lambda <z, Psi z> / 2
  double fixed_empirical = 0.0;    // lambda n (ln M(t) - <t,m>) / a^2
  double fixed_target = 0.0;       // lambda <z, C z> / 2
  double gap_poisson = 0.0;        // relative gaps
  double gap_fixed = 0.0;
  double max_theta_k = 0.0;
};

/// Scaled cumulant check: at theta = (a_n/sqrt(n)) z the compound-Poisson
/// cumulant generating function, recentred and scaled by a_n^2, must
/// approach the quadratic forms of the limit law's moments.  theta_exp in
/// (0, 1/2) sets a_n = n^{theta_exp}.
inline CgfReport cgf_check(const Model& model, const DualSolution& dual, double n,
                           double theta_exp, const Eigen::VectorXd& z,
                           double tail_target = 1e-10) {
  const int S = model.S();
  if (z.size() != S) throw ValidationError("BadArgument", "z must have one entry per type");
  if (!(theta_exp > 0.0 && theta_exp < 0.5))
    throw ValidationError("BadArgument", "theta_exp must lie in (0, 1/2)");
  LimitLaw law = limit_jump_law(model, dual, tail_target);
  const double lambda = dual.q;
  const double a = std::pow(n, theta_exp);
  Eigen::VectorXd theta = (a / std::sqrt(n)) * z;

  double max_tk = 0.0;
  for (auto& k : law.ks) {
    double tk = 0.0;
    for (int s = 0; s < S; ++s) tk += theta[s] * k[s];
    max_tk = std::max(max_tk, tk);
  }
  if (max_tk > 50.0)
    throw NumericalError("OverflowGuard",
                         "theta is too large for a stable exponential-moment sum");

  NeumaierSum msum;
  for (std::size_t i = 0; i < law.ks.size(); ++i) {
    double tk = 0.0;
    for (int s = 0; s < S; ++s) tk += theta[s] * law.ks[i][s];
    msum.add(std::exp(tk) * law.prob[i]);
  }
  double M = msum.total();
  double zm = z.dot(law.mean);
  double tm = theta.dot(law.mean);
  Eigen::MatrixXd C = law.psi - law.mean * law.mean.transpose();

  CgfReport rep;
  rep.a_n = a;
  rep.max_theta_k = max_tk;
  rep.poisson_empirical = (lambda * n * (M - 1.0) - a * std::sqrt(n) * lambda * zm) / (a * a);
  rep.poisson_target = 0.5 * lambda * z.dot(law.psi * z);
  rep.fixed_empirical = lambda * n * (std::log(M) - tm) / (a * a);
  rep.fixed_target = 0.5 * lambda * z.dot(C * z);
  rep.gap_poisson = std::abs(rep.poisson_empirical / rep.poisson_target - 1.0);
  rep.gap_fixed = std::abs(rep.fixed_empirical / rep.fixed_target - 1.0);
  return rep;
}

}  // namespace mtg
