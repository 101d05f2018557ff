#pragma once
/// \file conn.hpp
/// The connection probability p_n(k): the probability that the random graph
/// restricted to a vertex multiset with type counts k is connected, when
/// each pair is joined independently with probability min(1, kappa/n).
///
/// Exact values come from the anchored inclusion-exclusion recursion
///   q(k) = 1 - sum over proper sub-multisets m containing a fixed anchor
///          vertex of [choose ways] q(m) [no-edge factor between m and k-m],
/// memoized over the sub-multiset lattice.  The recursion computes 1 minus
/// a near-unit sum, so a double-double instantiation is provided for the
/// regimes where p_n(k) itself is far below the double cancellation floor.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "mtgraph/common.hpp"
#include "mtgraph/dd.hpp"
#include "mtgraph/numerics.hpp"
#include "mtgraph/tree.hpp"
#include "mtgraph/typevec.hpp"

namespace mtg {

struct ConnProbResult {
  double value = 0.0;
  double log_value = 0.0;
  const char* method = "exact-dp";
};

namespace detail {

template <class Real>
struct RealTraits;

template <>
struct RealTraits<double> {
  static double from(double x) { return x; }
  static double to_double(double x) { return x; }
  static double pow_int(double base, long long e) {
    // exp(e log base) keeps the relative error ~ e * ulp, plenty for the
    // double instantiation's own cancellation floor
    if (e == 0) return 1.0;
    return std::exp(static_cast<double>(e) * std::log(base));
  }
};

template <>
struct RealTraits<dd> {
  static dd from(double x) { return dd(x); }
  static double to_double(dd x) { return static_cast<double>(x); }
  static dd pow_int(dd base, long long e) { return mtg::pow_int(base, e); }
};

/// The full DP over the box {m : 0 <= m <= k}.  Results for every
/// sub-multiset are kept, so one table serves all k' <= k.
template <class Real>
class ConnTable {
 public:
  ConnTable(const TypeVec& k, long long n, const Eigen::MatrixXd& kappa)
      : cap_(k), S_(static_cast<int>(k.size())) {
    long long states = 1;
    for (int v : k) {
      if (v < 0) throw ValidationError("BadArgument", "negative entry in type vector");
      states *= (v + 1);
      if (states > 10'000'000)
        throw ValidationError("StateSpaceTooLarge",
                              "connection-probability lattice exceeds 1e7 states");
    }
    strides_.resize(S_);
    long long s = 1;
    for (int i = 0; i < S_; ++i) {
      strides_[i] = s;
      s *= (cap_[i] + 1);
    }
    table_.assign(static_cast<std::size_t>(states), Real(0.0));

    // 1 - p as Real, exact from the rational definition
    one_minus_p_.resize(S_ * S_);
    for (int a = 0; a < S_; ++a)
      for (int b = 0; b < S_; ++b) {
        double p = std::min(1.0, kappa(a, b) / static_cast<double>(n));
        one_minus_p_[a * S_ + b] =
            Real(1.0) - RealTraits<Real>::from(kappa(a, b)) / RealTraits<Real>::from(static_cast<double>(n));
        if (p >= 1.0) one_minus_p_[a * S_ + b] = Real(0.0);
      }

    int kmax = 0;
    for (int v : k) kmax = std::max(kmax, v);
    pascal_.assign(kmax + 1, std::vector<Real>(kmax + 1, Real(0.0)));
    for (int i = 0; i <= kmax; ++i) {
      pascal_[i][0] = Real(1.0);
      for (int j = 1; j <= i; ++j)
        pascal_[i][j] = pascal_[i - 1][j - 1] + (j <= i - 1 ? pascal_[i - 1][j] : Real(0.0));
    }

    fill();
  }

  Real at(const TypeVec& m) const { return table_[index(m)]; }

 private:
  std::size_t index(const TypeVec& m) const {
    long long idx = 0;
    for (int i = 0; i < S_; ++i) idx += m[i] * strides_[i];
    return static_cast<std::size_t>(idx);
  }

  void fill() {
    const long long ktot = total(cap_);
    for (long long tot = 1; tot <= ktot; ++tot) {
      // all m <= cap with |m| = tot
      TypeVec m(S_, 0);
      std::function<void(int, long long)> rec = [&](int pos, long long remaining) {
        if (pos == S_ - 1) {
          if (remaining > cap_[pos]) return;
          m[pos] = static_cast<int>(remaining);
          compute(m);
          return;
        }
        long long lim = std::min<long long>(cap_[pos], remaining);
        for (long long v = 0; v <= lim; ++v) {
          m[pos] = static_cast<int>(v);
          rec(pos + 1, remaining - v);
        }
      };
      rec(0, tot);
    }
  }

  void compute(const TypeVec& m) {
    if (total(m) == 1) {
      table_[index(m)] = Real(1.0);
      return;
    }
    // anchor on the most numerous type (first argmax); the value is
    // anchor-independent, this choice just minimizes the inner sum
    int r = 0;
    for (int i = 1; i < S_; ++i)
      if (m[i] > m[r]) r = i;

    Real acc(0.0);
    TypeVec mm(S_, 0);
    std::function<void(int)> rec = [&](int pos) {
      if (pos == S_) {
        if (mm == m || mm[r] < 1) return;
        Real term(1.0);
        for (int s = 0; s < S_; ++s) {
          int d = (s == r) ? 1 : 0;
          term *= pascal_[m[s] - d][mm[s] - d];
        }
        term *= table_[index(mm)];
        for (int s = 0; s < S_; ++s) {
          if (mm[s] == 0) continue;
          for (int s2 = 0; s2 < S_; ++s2) {
            long long e = static_cast<long long>(mm[s]) * (m[s2] - mm[s2]);
            if (e > 0) term *= RealTraits<Real>::pow_int(one_minus_p_[s * S_ + s2], e);
          }
        }
        acc += term;
        return;
      }
      int lo = (pos == r) ? 1 : 0;
      for (int v = lo; v <= m[pos]; ++v) {
        mm[pos] = v;
        rec(pos + 1);
      }
      mm[pos] = 0;
    };
    rec(0);
    table_[index(m)] = Real(1.0) - acc;
  }

  TypeVec cap_;
  int S_;
  std::vector<long long> strides_;
  std::vector<Real> table_;
  std::vector<Real> one_minus_p_;
  std::vector<std::vector<Real>> pascal_;
};

}  // namespace detail

/// Exact p_n(k) in double precision with compensated inner summation.
inline ConnProbResult p_conn_exact(const TypeVec& k, long long n, const Eigen::MatrixXd& kappa) {
  if (total(k) < 1) throw ValidationError("BadArgument", "k must have at least one vertex");
  detail::ConnTable<double> table(k, n, kappa);
  double v = table.at(k);
  ConnProbResult res;
  res.value = std::min(1.0, std::max(0.0, v));
  res.log_value = res.value > 0.0 ? std::log(res.value) : -std::numeric_limits<double>::infinity();
  res.method = "exact-dp";
  return res;
}

/// Exact p_n(k) in double-double precision (raw, unclamped).  The absolute
/// cancellation noise is ~1e-31, so values above ~1e-26 retain at least
/// five significant digits; callers enforce their own trust floor.
inline dd p_conn_exact_dd(const TypeVec& k, long long n, const Eigen::MatrixXd& kappa) {
  if (total(k) < 1) throw ValidationError("BadArgument", "k must have at least one vertex");
  detail::ConnTable<dd> table(k, n, kappa);
  return table.at(k);
}

/// A reusable double-double table over the whole box {m <= k}; serves many
/// queries against one lattice (the component-law builders walk boxes).
class ConnTableDD {
 public:
  ConnTableDD(const TypeVec& cap, long long n, const Eigen::MatrixXd& kappa)
      : table_(cap, n, kappa) {}
  dd at(const TypeVec& m) const { return table_.at(m); }

 private:
  detail::ConnTable<dd> table_;
};

/// Brute-force p_n(k): sum over all 2^{C(|k|,2)} edge subsets whose graph
/// connects the multiset.  The independent oracle for the recursion.
inline ConnProbResult p_conn_brute(const TypeVec& k, long long n, const Eigen::MatrixXd& kappa) {
  std::vector<int> types;
  for (std::size_t r = 0; r < k.size(); ++r)
    for (int c = 0; c < k[r]; ++c) types.push_back(static_cast<int>(r));
  const int N = static_cast<int>(types.size());
  if (N < 1) throw ValidationError("BadArgument", "k must have at least one vertex");
  if (N > 6) throw ValidationError("TooLarge", "brute-force connectivity supports |k| <= 6");

  std::vector<std::pair<int, int>> pairs;
  std::vector<double> pe;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      pairs.emplace_back(i, j);
      pe.push_back(std::min(1.0, kappa(types[i], types[j]) / static_cast<double>(n)));
    }
  const int E = static_cast<int>(pairs.size());
  NeumaierSum sum;
  std::vector<int> parent(N);
  for (std::uint32_t mask = 0; mask < (1u << E); ++mask) {
    for (int i = 0; i < N; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int comps = N;
    double prob = 1.0;
    for (int e = 0; e < E; ++e) {
      if (mask & (1u << e)) {
        prob *= pe[e];
        int a = find(pairs[e].first), b = find(pairs[e].second);
        if (a != b) {
          parent[a] = b;
          --comps;
        }
      } else {
        prob *= 1.0 - pe[e];
      }
    }
    if (comps == 1) sum.add(prob);
  }
  ConnProbResult res;
  res.value = std::min(1.0, std::max(0.0, sum.total()));
  res.log_value = res.value > 0.0 ? std::log(res.value) : -std::numeric_limits<double>::infinity();
  res.method = "brute-force";
  return res;
}

struct ConnBounds {
  double est_lower = 0.0;   // (1 - max kappa / n)^{|k|^2/2} n^{1-|k|} tau(k)
  double est_upper = 0.0;   // n^{1-|k|} tau(k)
  double meso_upper = 0.0;  // mesoscopic product bound, anchored at type r
  double esti2p_upper = 0.0;  // Stirling-scale upper product (its 1+O(1/n) factor dropped)
  double plb_shape = 0.0;     // lower-bound shape (its unknown constant dropped)
  int anchor = 0;
};

/// Closed-form bounds on p_n(k).  anchor must index a nonzero coordinate of
/// k; by default the most numerous type.  The est pair is a rigorous
/// sandwich; meso is a rigorous upper bound; esti2p and plb_shape carry
/// unspecified asymptotic factors and are exposed for trend studies only.
inline ConnBounds p_conn_bounds(const TypeVec& k, long long n, const Eigen::MatrixXd& kappa,
                                int anchor = -1) {
  const int S = static_cast<int>(k.size());
  long long ktot = total(k);
  if (ktot < 1) throw ValidationError("BadArgument", "k must have at least one vertex");
  if (anchor < 0) {
    anchor = 0;
    for (int i = 1; i < S; ++i)
      if (k[i] > k[anchor]) anchor = i;
  }
  if (anchor >= S || k[anchor] == 0)
    throw ValidationError("BadArgument", "anchor must index a nonzero coordinate of k");

  ConnBounds b;
  b.anchor = anchor;
  double kmax = kappa.maxCoeff();
  double lt = tau_log(k, kappa);
  double ln_n = std::log(static_cast<double>(n));
  b.est_upper = std::exp((1.0 - static_cast<double>(ktot)) * ln_n + lt);
  b.est_lower =
      b.est_upper * std::exp(0.5 * static_cast<double>(ktot) * static_cast<double>(ktot) *
                             std::log1p(-std::min(1.0, kmax / static_cast<double>(n))));

  // (kappa k)_s and the support of k
  std::vector<double> kk(S, 0.0);
  int supp = 0;
  for (int s = 0; s < S; ++s) {
    for (int s2 = 0; s2 < S; ++s2) kk[s] += kappa(s, s2) * k[s2];
    if (k[s] > 0) ++supp;
  }

  double log_meso = (supp - 1) * std::log(kmax * supp) + (1.0 - static_cast<double>(ktot)) * ln_n -
                    2.0 * std::log(static_cast<double>(k[anchor]));
  for (int s = 0; s < S; ++s)
    if (k[s] > 0) log_meso += (k[s] - 1) * std::log(kk[s]) + std::log(static_cast<double>(k[s]));
  b.meso_upper = std::exp(log_meso);

  double log_e2p = 0.0, log_plb = 0.0;
  for (int s = 0; s < S; ++s) {
    double cap = -std::expm1(-kk[s] / static_cast<double>(n));  // 1 - e^{-(kappa k)_s / n}
    log_e2p += kk[s] / (2.0 * static_cast<double>(n));
    if (k[s] > 0) {
      log_e2p += 0.5 * std::log(2.0 * std::numbers::pi * k[s]) + k[s] * std::log(cap);
      log_plb += ln_n - 0.5 * std::log(static_cast<double>(k[s])) + k[s] * std::log(cap);
    }
  }
  log_plb += std::log(-std::expm1(-kk[anchor] / static_cast<double>(n)));
  b.esti2p_upper = std::exp(log_e2p);
  b.plb_shape = std::exp(log_plb);
  return b;
}

/// Binomial upper bound on p_n(k) from an anchored spanning argument: valid
/// for k with k_r <= 1 at the anchor r and a comparison vector m >= k
/// componentwise (the binomials C(m_s - d, k_s - d) vanish otherwise, which
/// would put a zero in the denominator).
inline double binom_upper(const TypeVec& k, long long n, const Eigen::MatrixXd& kappa, int r,
                          const TypeVec& m) {
  const int S = static_cast<int>(k.size());
  if (r < 0 || r >= S || k[r] > 1)
    throw ValidationError("PreconditionViolated", "binomial bound needs k_r <= 1 at the anchor");
  if (m.size() != k.size() || !leq(k, m))
    throw ValidationError("PreconditionViolated",
                          "binomial bound needs m >= k componentwise (else its binomials vanish)");
  double log_v = 0.0;
  for (int s = 0; s < S; ++s) {
    int d = (s == r) ? 1 : 0;
    log_v -= log_choose(m[s] - d, k[s] - d);
  }
  for (int s = 0; s < S; ++s)
    for (int s2 = 0; s2 < S; ++s2) {
      double p = std::min(1.0, kappa(s, s2) / static_cast<double>(n));
      log_v -= static_cast<double>(k[s]) * (m[s2] - k[s2]) * std::log1p(-p);
    }
  return std::exp(log_v);
}

}  // namespace mtg
