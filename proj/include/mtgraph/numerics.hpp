#pragma once
/// \file numerics.hpp
/// Compensated summation, streaming moments, jackknife errors for variance
/// estimates, the regularized incomplete gamma function (for chi-square
/// p-values), and deterministic float formatting.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "mtgraph/common.hpp"

namespace mtg {

/// Neumaier's improved Kahan summation: exact to one ulp of the result for
/// ill-conditioned sums of doubles.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double total() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Sample mean and unbiased variance of a data vector.
struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // ddof = 1
};

inline MeanVar mean_var(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("InsufficientReplicates", "need at least 2 samples");
  NeumaierSum s;
  for (double v : x) s.add(v);
  double mean = s.total() / static_cast<double>(n);
  NeumaierSum s2;
  for (double v : x) s2.add((v - mean) * (v - mean));
  return {mean, s2.total() / static_cast<double>(n - 1)};
}

/// Unbiased sample covariance of two equally long vectors.
inline double covariance(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw ValidationError("InsufficientReplicates", "need two equal vectors, length >= 2");
  double mx = mean_var(x).mean, my = mean_var(y).mean;
  NeumaierSum s;
  for (std::size_t i = 0; i < n; ++i) s.add((x[i] - mx) * (y[i] - my));
  return s.total() / static_cast<double>(n - 1);
}

/// Delete-one jackknife standard error of the unbiased sample variance.
/// O(n): the leave-one-out variance has a closed form in (x_i, mean, SS).
inline double jackknife_var_se(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 3) throw ValidationError("InsufficientReplicates", "jackknife needs >= 3");
  MeanVar mv = mean_var(x);
  double ss = mv.var * (n - 1.0);  // sum of squared deviations
  std::vector<double> loo(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - mv.mean;
    // SS without sample i, relative to the leave-one-out mean
    double ss_i = ss - d * d * n / (n - 1.0);
    loo[i] = ss_i / (n - 2.0);
  }
  MeanVar lmv = mean_var(loo);
  // jackknife SE^2 = (n-1)/n * sum (v_i - vbar)^2
  return std::sqrt((n - 1.0) * (n - 1.0) / n * lmv.var);
}

/// Jackknife standard error of the sample covariance of (x, y); O(n^2) naive
/// recomputation is avoided with the same rank-one update idea.
inline double jackknife_cov_se(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 3 || y.size() != x.size())
    throw ValidationError("InsufficientReplicates", "jackknife needs two equal vectors, >= 3");
  double mx = mean_var(x).mean, my = mean_var(y).mean;
  NeumaierSum sp;
  for (std::size_t i = 0; i < x.size(); ++i) sp.add((x[i] - mx) * (y[i] - my));
  double ss = sp.total();
  std::vector<double> loo(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    double ss_i = ss - dx * dy * n / (n - 1.0);
    loo[i] = ss_i / (n - 2.0);
  }
  MeanVar lmv = mean_var(loo);
  return std::sqrt((n - 1.0) * (n - 1.0) / n * lmv.var);
}

/// log of the binomial coefficient, via lgamma.
inline double log_choose(long long n, long long k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

namespace detail {

/// Lower regularized incomplete gamma P(a,x) by power series (x < a+1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericalError("NoConvergence", "incomplete gamma series did not converge");
}

/// Upper regularized incomplete gamma Q(a,x) by Lentz continued fraction
/// (x >= a+1).
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericalError("NoConvergence", "incomplete gamma fraction did not converge");
}

}  // namespace detail

/// Upper regularized incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a).
inline double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw ValidationError("BadArgument", "gamma_q needs a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

/// Survival function of the chi-square distribution with df degrees.
inline double chi2_sf(double x, double df) { return gamma_q(df / 2.0, x / 2.0); }

/// Shortest round-trip decimal representation of a double.  All file output
/// goes through this so that equal values print identically everywhere.
inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// FNV-1a 64-bit hash, used as the cheap content digest in manifests.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace mtg
