#pragma once
/// \file model.hpp
/// The graph model G(n, mu, kappa): n vertices split into types by the
/// measure mu, an edge between vertices of types r and s present with
/// probability min(1, kappa(r,s)/n) independently.  This header owns model
/// validation, the integerization of per-type vertex counts, criticality
/// classification through the Perron root of kappa*D_mu, the simplex
/// supremum [kappa], and the exponential-moment sufficient condition.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mtgraph/common.hpp"
#include "mtgraph/config.hpp"
#include "mtgraph/typevec.hpp"

namespace mtg {

struct ModelSpec {
  std::vector<std::string> type_labels;
  Eigen::MatrixXd kappa;
  Eigen::VectorXd mu;
  long long n = 0;
};

/// A validated model: the spec plus integerized per-type vertex counts and
/// the realized finite-n measure mu_n = counts / n.
struct Model {
  ModelSpec spec;
  std::vector<long long> counts;  // per-type vertex counts, sum = n
  Eigen::VectorXd mu_n;           // counts / n

  int S() const { return static_cast<int>(spec.mu.size()); }
  long long n() const { return spec.n; }
  const Eigen::MatrixXd& kappa() const { return spec.kappa; }
  const Eigen::VectorXd& mu() const { return spec.mu; }

  /// Edge probability between types r and s: min(1, kappa(r,s)/n).
  double edge_prob(int r, int s) const {
    return std::min(1.0, spec.kappa(r, s) / static_cast<double>(spec.n));
  }

  /// True when some kappa entry exceeds n, i.e. clamping changed the model.
  bool clamped() const { return spec.kappa.maxCoeff() > static_cast<double>(spec.n); }
};

enum class Regime { Subcritical, NearCritical, Supercritical };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::NearCritical: return "near-critical";
    default: return "supercritical";
  }
}

struct CriticalityReport {
  double sigma = 0.0;      // Perron root of kappa * D_mu
  Regime regime = Regime::Subcritical;
  double kappa_sup = 0.0;  // sup over the probability simplex of <v, kappa v>
  bool moment_condition_ok = false;
  double moment_margin = 0.0;  // sigma - log(sigma) - kappa_sup/2 - 1
};

/// Largest-remainder integerization of mu*n: floor everything, then hand the
/// remaining units to the coordinates with the largest fractional parts
/// (ties to the lower index).  Counts sum to n exactly.
inline std::vector<long long> integerize_counts(const Eigen::VectorXd& mu, long long n) {
  const int S = static_cast<int>(mu.size());
  std::vector<long long> counts(S);
  std::vector<std::pair<double, int>> frac(S);
  long long assigned = 0;
  for (int i = 0; i < S; ++i) {
    double exact = mu(i) * static_cast<double>(n);
    counts[i] = static_cast<long long>(std::floor(exact + 1e-12));
    frac[i] = {exact - static_cast<double>(counts[i]), i};
    assigned += counts[i];
  }
  long long deficit = n - assigned;
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long long d = 0; d < deficit; ++d) counts[frac[static_cast<std::size_t>(d) % S].second] += 1;
  return counts;
}

inline Model validate_model(const ModelSpec& spec) {
  const int S = static_cast<int>(spec.mu.size());
  if (S < 1) throw ValidationError("BadConfig", "model needs at least one type");
  if (spec.kappa.rows() != S || spec.kappa.cols() != S)
    throw ValidationError("BadConfig", "kappa must be |S| x |S| to match mu");
  if (spec.n < 1) throw ValidationError("BadConfig", "n must be a positive integer");
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j) {
      if (!(spec.kappa(i, j) > 0.0))
        throw ValidationError("NonPositiveEntry", "kappa entries must be strictly positive");
      if (std::abs(spec.kappa(i, j) - spec.kappa(j, i)) > 1e-12)
        throw ValidationError("NonSymmetricKernel",
                              "kappa(" + std::to_string(i) + "," + std::to_string(j) +
                                  ") != kappa(" + std::to_string(j) + "," + std::to_string(i) + ")");
    }
  double mass = 0.0;
  for (int i = 0; i < S; ++i) {
    if (!(spec.mu(i) > 0.0))
      throw ValidationError("NonPositiveEntry", "mu entries must be strictly positive");
    mass += spec.mu(i);
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw ValidationError("MeasureNotNormalized",
                          "mu sums to " + std::to_string(mass) + ", expected 1");

  Model m;
  m.spec = spec;
  if (m.spec.type_labels.empty())
    for (int i = 0; i < S; ++i) m.spec.type_labels.push_back(std::to_string(i));
  if (static_cast<int>(m.spec.type_labels.size()) != S)
    throw ValidationError("BadConfig", "type label count does not match mu length");
  m.counts = integerize_counts(spec.mu, spec.n);
  long long sum = std::accumulate(m.counts.begin(), m.counts.end(), 0LL);
  if (sum != spec.n)
    throw ValidationError("CountMismatch", "integerized counts do not sum to n");
  m.mu_n.resize(S);
  for (int i = 0; i < S; ++i) m.mu_n(i) = static_cast<double>(m.counts[i]) / static_cast<double>(spec.n);
  return m;
}

/// Model file keys: kappa (matrix), mu (vector), n (integer),
/// types (optional label list).
inline Model model_from_config(const Config& cfg) {
  ModelSpec spec;
  auto km = cfg.get_matrix("kappa");
  auto mv = cfg.get_vector("mu");
  const int S = static_cast<int>(mv.size());
  if (static_cast<int>(km.size()) != S)
    throw ValidationError("BadConfig", "kappa row count does not match mu length");
  spec.kappa.resize(S, S);
  for (int i = 0; i < S; ++i) {
    if (static_cast<int>(km[i].size()) != S)
      throw ValidationError("BadConfig", "kappa must be square");
    for (int j = 0; j < S; ++j) spec.kappa(i, j) = km[i][j];
  }
  spec.mu.resize(S);
  for (int i = 0; i < S; ++i) spec.mu(i) = mv[i];
  spec.n = cfg.get_int("n");
  if (cfg.has("types")) spec.type_labels = cfg.get_string_list("types");
  return validate_model(spec);
}

/// Perron root of kappa * D_mu by power iteration from the all-ones vector,
/// relative tolerance 1e-12.  The matrix is strictly positive, so the
/// iteration converges to the dominant (Perron) eigenvalue.
inline double sigma(const Model& m, double rel_tol = 1e-12, int max_iter = 100000) {
  const int S = m.S();
  Eigen::MatrixXd M = m.kappa() * m.mu().asDiagonal();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(S);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = M * v;
    double nl = w.norm();
    if (nl == 0.0) throw NumericalError("NoConvergence", "power iteration collapsed");
    w /= nl;
    double est = w.dot(M * w) / w.dot(w);
    if (it > 0 && std::abs(est - lambda) <= rel_tol * std::abs(est)) return est;
    lambda = est;
    v = w;
  }
  throw NumericalError("NoConvergence", "power iteration hit the iteration cap");
}

namespace detail {

/// Maximize f(nu) = <nu, kappa nu> over the segment where only coordinates
/// (i, j) vary with fixed total mass mass_ij; closed-form 1-D quadratic.
inline double pair_ascent_step(const Eigen::MatrixXd& kappa, Eigen::VectorXd& nu, int i, int j) {
  double massij = nu(i) + nu(j);
  if (massij <= 0.0) return 0.0;
  // f(t) with nu_i = t, nu_j = massij - t is a quadratic a t^2 + b t + const.
  Eigen::VectorXd rest = nu;
  rest(i) = 0.0;
  rest(j) = 0.0;
  double a = kappa(i, i) + kappa(j, j) - 2.0 * kappa(i, j);
  Eigen::VectorXd ki = kappa.col(i), kj = kappa.col(j);
  double b = 2.0 * (rest.dot(ki) - rest.dot(kj)) + 2.0 * massij * (kappa(i, j) - kappa(j, j));
  double best_t = 0.0, best_f = -1.0;
  auto eval = [&](double t) {
    Eigen::VectorXd cand = rest;
    cand(i) = t;
    cand(j) = massij - t;
    double f = cand.dot(kappa * cand);
    if (f > best_f) {
      best_f = f;
      best_t = t;
    }
  };
  eval(0.0);
  eval(massij);
  if (a < 0.0) {
    double t = -b / (2.0 * a);
    if (t > 0.0 && t < massij) eval(t);
  }
  double before = nu.dot(kappa * nu);
  nu(i) = best_t;
  nu(j) = massij - best_t;
  return best_f - before;
}

inline double simplex_ascent(const Eigen::MatrixXd& kappa, Eigen::VectorXd nu) {
  const int S = static_cast<int>(nu.size());
  for (int sweep = 0; sweep < 500; ++sweep) {
    double gain = 0.0;
    for (int i = 0; i < S; ++i)
      for (int j = i + 1; j < S; ++j) gain += pair_ascent_step(kappa, nu, i, j);
    if (gain < 1e-15) break;
  }
  return nu.dot(kappa * nu);
}

}  // namespace detail

/// [kappa] = sup over the probability simplex of <nu, kappa nu>.
/// |S| <= 2: closed form.  |S| = 3: 1/200 grid plus pairwise coordinate
/// ascent.  |S| in 4..6: multi-start pairwise ascent (all vertices, all edge
/// midpoints, barycenter).  |S| > 6: refused.
inline double kappa_sup(const Model& m) {
  const Eigen::MatrixXd& k = m.kappa();
  const int S = m.S();
  if (S == 1) return k(0, 0);
  if (S == 2) {
    double a = k(0, 0) + k(1, 1) - 2.0 * k(0, 1);
    double best = std::max(k(0, 0), k(1, 1));
    if (a < 0.0) {
      // stationary point of the concave 1-D quadratic f(t), t = weight on type 0
      double t = (k(1, 1) - k(0, 1)) / a;
      if (t > 0.0 && t < 1.0) {
        Eigen::Vector2d nu(t, 1.0 - t);
        best = std::max(best, double(nu.transpose() * k * nu));
      }
    }
    return best;
  }
  if (S > 6)
    throw ValidationError("DimensionTooLarge",
                          "simplex maximization supported for |S| <= 6; supply a bound manually");
  double best = 0.0;
  if (S == 3) {
    const int G = 200;
    for (int i = 0; i <= G; ++i)
      for (int j = 0; j <= G - i; ++j) {
        Eigen::Vector3d nu(i / double(G), j / double(G), (G - i - j) / double(G));
        best = std::max(best, double(nu.transpose() * k * nu));
      }
  }
  std::vector<Eigen::VectorXd> starts;
  for (int i = 0; i < S; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(S);
    e(i) = 1.0;
    starts.push_back(e);
  }
  for (int i = 0; i < S; ++i)
    for (int j = i + 1; j < S; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(S);
      e(i) = 0.5;
      e(j) = 0.5;
      starts.push_back(e);
    }
  starts.push_back(Eigen::VectorXd::Constant(S, 1.0 / S));
  for (const auto& s0 : starts) best = std::max(best, detail::simplex_ascent(k, s0));
  return best;
}

/// Criticality classification and the exponential-moment margin
/// sigma - log(sigma) - [kappa]/2 - 1 (> 0 means the sufficient condition
/// holds; a negative margin is reported as a warning, never a refusal).
inline CriticalityReport criticality(const Model& m, double eps_crit = 1e-6) {
  CriticalityReport rep;
  rep.sigma = sigma(m);
  if (rep.sigma < 1.0 - eps_crit)
    rep.regime = Regime::Subcritical;
  else if (rep.sigma > 1.0 + eps_crit)
    rep.regime = Regime::Supercritical;
  else
    rep.regime = Regime::NearCritical;
  rep.kappa_sup = kappa_sup(m);
  rep.moment_margin = rep.sigma - std::log(rep.sigma) - 0.5 * rep.kappa_sup - 1.0;
  rep.moment_condition_ok = rep.moment_margin > 0.0;
  return rep;
}

}  // namespace mtg
