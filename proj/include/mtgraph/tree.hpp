#pragma once
/// \file tree.hpp
/// Weighted spanning-tree counts tau(k) over typed vertex multisets, the
/// per-component density h(k), and the truncated summation identities that
/// tie h to the dual solution: sum h = |c| - <c,kappa c>/2, sum k h = c,
/// and the second-moment matrix Phi = sum k k^T h = (D_c^{-1} - kappa)^{-1}.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mtgraph/common.hpp"
#include "mtgraph/dual.hpp"
#include "mtgraph/model.hpp"
#include "mtgraph/numerics.hpp"
#include "mtgraph/typevec.hpp"

namespace mtg {

namespace detail {

/// Expand k into the explicit vertex-type list (k_0 copies of type 0, ...).
inline std::vector<int> expand_types(const TypeVec& k) {
  std::vector<int> types;
  for (std::size_t r = 0; r < k.size(); ++r) {
    if (k[r] < 0) throw ValidationError("BadArgument", "negative entry in type vector");
    for (int c = 0; c < k[r]; ++c) types.push_back(static_cast<int>(r));
  }
  return types;
}

}  // namespace detail

/// log tau(k): log of the kappa-weighted number of spanning trees on the
/// complete graph over the vertex multiset k (edge weight kappa(type_i,
/// type_j)), via the weighted matrix-tree theorem: delete one row/column of
/// the weighted Laplacian and take the log-determinant from a pivoted LU,
/// summing logs of the diagonal to avoid overflow (tau ~ |k|^{|k|-2}).
inline double tau_log(const TypeVec& k, const Eigen::MatrixXd& kappa) {
  auto types = detail::expand_types(k);
  const int N = static_cast<int>(types.size());
  if (N < 1) throw ValidationError("BadArgument", "tau of the zero vector is undefined");
  if (N == 1) return 0.0;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      double w = kappa(types[i], types[j]);
      L(i, j) = -w;
      L(i, i) += w;
    }
  Eigen::MatrixXd M = L.bottomRightCorner(N - 1, N - 1);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  double logdet = 0.0;
  for (int i = 0; i < N - 1; ++i) {
    double d = std::abs(lu.matrixLU()(i, i));
    if (!(d > 0.0))
      throw NumericalError("SingularLaplacian", "zero pivot in the reduced Laplacian");
    logdet += std::log(d);
  }
  return logdet;  // the determinant is positive: the reduced Laplacian is PD
}

/// tau(k) by exhaustive tree enumeration (the independent slow route):
/// decode every one of the |k|^{|k|-2} Pruefer sequences to a labeled tree
/// and sum the edge-weight products.  |k| <= 8.
inline double tau_enum(const TypeVec& k, const Eigen::MatrixXd& kappa) {
  auto types = detail::expand_types(k);
  const int N = static_cast<int>(types.size());
  if (N < 1) throw ValidationError("BadArgument", "tau of the zero vector is undefined");
  if (N > 8) throw ValidationError("TooLarge", "tree enumeration supports |k| <= 8");
  if (N == 1) return 1.0;
  if (N == 2) return kappa(types[0], types[1]);

  const int L = N - 2;
  std::vector<int> seq(L, 0);
  NeumaierSum sum;
  std::vector<int> degree(N);
  while (true) {
    // decode the current Pruefer sequence
    std::fill(degree.begin(), degree.end(), 1);
    for (int a : seq) degree[a] += 1;
    double w = 1.0;
    std::vector<int> deg = degree;
    for (int a : seq) {
      int leaf = -1;
      for (int v = 0; v < N; ++v)
        if (deg[v] == 1) {
          leaf = v;
          break;
        }
      w *= kappa(types[leaf], types[a]);
      deg[leaf] -= 1;
      deg[a] -= 1;
    }
    int u = -1, v = -1;
    for (int x = 0; x < N; ++x)
      if (deg[x] == 1) (u < 0 ? u : v) = x;
    w *= kappa(types[u], types[v]);
    sum.add(w);
    // advance the base-N odometer over sequences
    int pos = 0;
    while (pos < L && ++seq[pos] == N) seq[pos++] = 0;
    if (pos == L) break;
  }
  return sum.total();
}

struct ClusterWeight {
  double log_tau = 0.0;
  double h = 0.0;         // assembled with the model measure mu
  double log_h = 0.0;
  double h_dual = 0.0;    // same value assembled with the dual vector c
  double log_h_dual = 0.0;
};

/// h(k) = tau(k) * prod_s (mu_s e^{-(kappa mu)_s})^{k_s} / k_s! — the
/// limiting number of components with configuration k per vertex.  The dual
/// form replaces (mu, kappa mu) by (c, kappa c); the characteristic equation
/// makes both forms equal, which doubles as a cross-check.
inline ClusterWeight h_value(const TypeVec& k, const Model& m, const DualSolution& dual) {
  if (is_zero(k)) throw ValidationError("BadArgument", "h of the zero vector is undefined");
  ClusterWeight cw;
  cw.log_tau = tau_log(k, m.kappa());
  Eigen::VectorXd kmu = m.kappa() * m.mu();
  Eigen::VectorXd kc = m.kappa() * dual.c;
  double lm = cw.log_tau, lc = cw.log_tau;
  for (int s = 0; s < m.S(); ++s) {
    if (k[s] == 0) continue;
    lm += k[s] * (std::log(m.mu()(s)) - kmu(s)) - std::lgamma(k[s] + 1.0);
    lc += k[s] * (std::log(dual.c(s)) - kc(s)) - std::lgamma(k[s] + 1.0);
  }
  cw.log_h = lm;
  cw.log_h_dual = lc;
  cw.h = lm < -700.0 ? 0.0 : std::exp(lm);
  cw.h_dual = lc < -700.0 ? 0.0 : std::exp(lc);
  return cw;
}

struct MassIdentities {
  double sum_h = 0.0;
  Eigen::VectorXd sum_kh;
  Eigen::MatrixXd phi_truncated;
  int truncation_radius = 0;   // largest |k| included
  double tail_estimate = 0.0;  // geometric tail bound on the slowest statistic
};

/// Truncated shell sums of h(k), k h(k), k k^T h(k) over shells {|k| = m}.
/// Stops when the geometric tail estimate shell/(1 - ratio) of the slowest
/// statistic drops below tol.  Decay must establish itself (ratio < 0.95)
/// within 60 shells, else NoDecay.
inline MassIdentities mass_identities(const Model& m, const DualSolution& dual, double tol = 1e-6,
                                      int max_shell = 400) {
  const int S = m.S();
  MassIdentities out;
  out.sum_kh = Eigen::VectorXd::Zero(S);
  out.phi_truncated = Eigen::MatrixXd::Zero(S, S);

  NeumaierSum s0;
  std::vector<NeumaierSum> s1(S);
  std::vector<NeumaierSum> s2(S * S);

  double prev_heavy = -1.0;
  double ratio = 1.0;
  for (int shell_m = 1; shell_m <= max_shell; ++shell_m) {
    double shell_heavy = 0.0;  // shell sum of |k|^2 h: the slowest-decaying statistic
    for (const TypeVec& k : shell(S, shell_m)) {
      if (is_zero(k)) continue;
      ClusterWeight cw = h_value(k, m, dual);
      if (cw.h == 0.0) continue;
      s0.add(cw.h);
      shell_heavy += static_cast<double>(shell_m) * shell_m * cw.h;
      for (int r = 0; r < S; ++r) {
        if (k[r] == 0) continue;
        s1[r].add(k[r] * cw.h);
        for (int s = 0; s < S; ++s)
          if (k[s] != 0) s2[r * S + s].add(static_cast<double>(k[r]) * k[s] * cw.h);
      }
    }
    if (prev_heavy > 0.0 && shell_heavy > 0.0) ratio = shell_heavy / prev_heavy;
    prev_heavy = shell_heavy;
    out.truncation_radius = shell_m;
    if (shell_m >= 60 && ratio >= 0.95)
      throw NumericalError("NoDecay",
                           "shell sums do not decay geometrically (ratio " +
                               format_double(ratio) + " at shell " + std::to_string(shell_m) +
                               "); the dual is too close to critical");
    if (shell_m >= 3 && ratio < 0.95) {
      // The observed consecutive-shell ratio of m^a rho^m (a < 0) sits below
      // the true geometric rate rho; inflating by (1 + 1/m) restores a safe
      // upper bound, so the reported tail dominates the true remainder.
      double r_safe = std::min(0.95, ratio * (1.0 + 1.0 / shell_m));
      double tail = shell_heavy * r_safe / (1.0 - r_safe);
      if (tail < tol) {
        out.tail_estimate = tail;
        break;
      }
    }
    if (shell_m == max_shell)
      throw NumericalError("NoDecay", "tail did not reach tolerance within " +
                                          std::to_string(max_shell) + " shells");
  }

  out.sum_h = s0.total();
  for (int r = 0; r < S; ++r) out.sum_kh(r) = s1[r].total();
  for (int r = 0; r < S; ++r)
    for (int s = 0; s < S; ++s) out.phi_truncated(r, s) = s2[r * S + s].total();
  return out;
}

/// Phi by its closed form (D_c^{-1} - kappa)^{-1}, computed by a direct
/// solve and symmetrized.
inline Eigen::MatrixXd phi_closed(const Model& m, const DualSolution& dual) {
  const int S = m.S();
  Eigen::MatrixXd Minv = Eigen::MatrixXd::Zero(S, S);
  for (int i = 0; i < S; ++i) {
    if (!(dual.c(i) > 0.0))
      throw NumericalError("SingularMatrix", "dual coordinate vanished; cannot invert D_c");
    Minv(i, i) = 1.0 / dual.c(i);
  }
  Minv -= m.kappa();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Minv);
  double mind = 1.0;
  for (int i = 0; i < S; ++i) mind = std::min(mind, std::abs(lu.matrixLU()(i, i)));
  if (mind < 1e-12 * Minv.cwiseAbs().maxCoeff())
    throw NumericalError("SingularMatrix", "D_c^{-1} - kappa is numerically singular");
  Eigen::MatrixXd phi = lu.solve(Eigen::MatrixXd::Identity(S, S));
  return 0.5 * (phi + phi.transpose());
}

}  // namespace mtg
