#pragma once
/// \file rng.hpp
/// Deterministic pseudo-randomness for the simulators.
///
/// The generator is splitmix64: a tiny, well-mixed, counter-based PRNG whose
/// name and master seed are recorded in every output manifest so any run can
/// be reproduced bit-for-bit on another machine.  Replicate streams are
/// derived from (master seed, replicate index) and never from global state,
/// which keeps multi-threaded batches schedule-independent.

#include <cmath>
#include <cstdint>

namespace mtg {

/// splitmix64 (Steele, Lea, Flood): 64-bit state advanced by a Weyl
/// constant, output mixed by two xor-shift-multiply rounds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in the open interval (0,1): 53 random bits shifted to
  /// the cell centers, so log(u) is always finite.
  double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Seed of the stream for one replicate: mix the master seed with the
/// index through one splitmix64 step so neighboring indices decorrelate.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 g(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
  return g.next();
}

/// Number of failures before the next success in Bernoulli(p) trials,
/// sampled by inversion.  Used for geometric edge skipping.  p in (0,1).
inline std::uint64_t geometric_skip(SplitMix64& g, double log1m_p) {
  // floor(log(U) / log(1-p)); log1m_p = log(1-p) precomputed by the caller.
  double u = g.uniform01();
  double v = std::log(u) / log1m_p;
  if (v >= 9.0e18) return UINT64_MAX;  // p so small the skip leaves any block
  return static_cast<std::uint64_t>(v);
}

/// Poisson sample by inversion.  Exact for any mean: large means are split
/// into chunks of mean <= 30 (a Poisson sum is Poisson), keeping the
/// per-chunk inversion loop short and e^{-mean} well inside double range.
inline long long poisson(SplitMix64& g, double mean) {
  if (mean <= 0.0) return 0;
  long long total = 0;
  int chunks = static_cast<int>(mean / 30.0) + 1;
  double m = mean / chunks;
  double p0 = std::exp(-m);
  for (int c = 0; c < chunks; ++c) {
    double u = g.uniform01();
    double p = p0;
    double cum = p;
    long long k = 0;
    while (u > cum) {
      ++k;
      p *= m / static_cast<double>(k);
      cum += p;
      if (k > 2000) break;  // cumulative has numerically saturated
    }
    total += k;
  }
  return total;
}

}  // namespace mtg
