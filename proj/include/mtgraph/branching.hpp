#pragma once
/// \file branching.hpp
/// The multi-type Poisson branching process attached to the kernel: an
/// individual of type s begets Poisson(kappa(s,r) mu_r) children of type r,
/// independently over r.  Its total-population law conditioned on extinction
/// matches the small-component profile of the graph.

#include <cstdint>
#include <deque>
#include <vector>

#include "mtgraph/common.hpp"
#include "mtgraph/model.hpp"
#include "mtgraph/rng.hpp"
#include "mtgraph/typevec.hpp"

namespace mtg {

struct GWResult {
  bool exploded = false;  // population cap hit before extinction
  TypeVec population;     // individuals ever born, per type (root included)
};

/// Sample the branching process from one root of the given type.  A run
/// whose population reaches `cap` is reported as exploded (survival).
inline GWResult sample_gw(const Model& model, int root_type, std::uint64_t seed,
                          long long cap = 3000) {
  const int S = model.S();
  if (root_type < 0 || root_type >= S)
    throw ValidationError("BadArgument", "root type out of range");
  SplitMix64 rng(seed);
  GWResult res;
  res.population.assign(S, 0);
  std::deque<int> frontier;
  frontier.push_back(root_type);
  ++res.population[root_type];
  long long born = 1;
  while (!frontier.empty()) {
    int s = frontier.front();
    frontier.pop_front();
    for (int r = 0; r < S; ++r) {
      double mean = model.kappa()(s, r) * model.mu()[r];
      if (mean <= 0.0) continue;
      long long children = poisson(rng, mean);
      for (long long c = 0; c < children; ++c) {
        ++res.population[r];
        ++born;
        frontier.push_back(r);
        if (born >= cap) {
          res.exploded = true;
          return res;
        }
      }
    }
  }
  return res;
}

}  // namespace mtg
