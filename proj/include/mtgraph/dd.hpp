#pragma once
/// \file dd.hpp
/// Double-double arithmetic: an unevaluated sum of two doubles giving
/// roughly 31 significant digits.  Used where a plain double loses the
/// result to cancellation, e.g. the inclusion–exclusion recursion for
/// connection probabilities, whose value is a tiny difference of
/// near-unit sums.
///
/// Algorithms are the classical error-free transformations (TwoSum,
/// Fast2Sum, and an FMA-based TwoProd).

#include <cmath>
#include <cstdint>
#include <limits>

namespace mtg {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }
};

namespace detail {

/// Error-free sum of two doubles (Knuth): a + b = s + err exactly.
inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

/// Error-free sum assuming |a| >= |b| (Dekker).
inline dd fast_two_sum(double a, double b) {
  double s = a + b;
  double err = b - (s - a);
  return {s, err};
}

/// Error-free product via fused multiply-add: a * b = p + err exactly.
inline dd two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return {p, err};
}

}  // namespace detail

inline dd operator+(dd a, dd b) {
  dd s = detail::two_sum(a.hi, b.hi);
  dd t = detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = detail::fast_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return detail::fast_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return detail::fast_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
  // Three Newton-style correction terms give full double-double accuracy.
  double q1 = a.hi / b.hi;
  dd r = a - b * dd(q1);
  double q2 = r.hi / b.hi;
  r = r - b * dd(q2);
  double q3 = r.hi / b.hi;
  dd q = detail::fast_two_sum(q1, q2);
  return q + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { return a = a + b; }
inline dd& operator-=(dd& a, dd b) { return a = a - b; }
inline dd& operator*=(dd& a, dd b) { return a = a * b; }
inline dd& operator/=(dd& a, dd b) { return a = a / b; }

inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }
inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }

inline dd abs(dd a) { return (a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0)) ? -a : a; }

/// Integer power by binary exponentiation; e >= 0.
inline dd pow_int(dd base, long long e) {
  dd result(1.0);
  dd b = base;
  while (e > 0) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

/// Natural log of a positive dd value: ln(hi) refined by one Newton step
/// ln(x) ~ ln(hi) + (x/hi - 1), accurate to ~30 digits for normal inputs.
inline double log(dd a) {
  double l = std::log(a.hi);
  dd ratio = a / dd(a.hi);
  return l + (ratio.hi - 1.0) + ratio.lo;
}

inline dd ldexp(dd a, int m) { return {std::ldexp(a.hi, m), std::ldexp(a.lo, m)}; }

inline dd sqrt_dd(dd a) {
  if (a.hi <= 0.0) return dd(a.hi == 0.0 ? 0.0 : std::nan(""));
  double s = std::sqrt(a.hi);
  dd e = a - dd(s) * dd(s);
  return dd(s) + e / (dd(2.0) * dd(s));
}

/// exp to full double-double accuracy: reduce by ln 2, then a scaled Taylor
/// series (argument halved 9 times, result squared back).
inline dd exp_dd(dd a) {
  if (a.hi > 709.0) return dd(std::numeric_limits<double>::infinity());
  if (a.hi < -709.0) return dd(0.0);
  static const dd kLn2(6.93147180559945286e-01, 2.31904681384629956e-17);
  int m = static_cast<int>(std::lround(a.hi / kLn2.hi));
  dd r = a - dd(static_cast<double>(m)) * kLn2;
  r = ldexp(r, -9);
  dd term(1.0), sum(1.0);
  for (int i = 1; i <= 14; ++i) {
    term = term * r / dd(static_cast<double>(i));
    sum += term;
    if (std::abs(term.hi) < 1e-35) break;
  }
  for (int i = 0; i < 9; ++i) sum *= sum;
  return ldexp(sum, m);
}

/// log to full double-double accuracy: double-precision seed plus one dd
/// Newton correction through exp_dd.
inline dd log_dd(dd a) {
  double x0 = std::log(a.hi);
  dd e = exp_dd(dd(x0));
  return dd(x0) + (a / e - dd(1.0));
}

}  // namespace mtg
