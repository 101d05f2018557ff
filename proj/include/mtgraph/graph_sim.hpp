#pragma once
/// \file graph_sim.hpp
/// Sampling the random graph and reading off its component census.
///
/// Edges inside and between type blocks are Bernoulli with probability
/// min(1, kappa(r,s)/n).  Instead of tossing a coin per pair, each block is
/// scanned with geometric jumps (skip ~ floor(log U / log(1-p))), so the
/// expected cost is O(n + #edges).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <thread>
#include <utility>
#include <vector>

#include "mtgraph/common.hpp"
#include "mtgraph/model.hpp"
#include "mtgraph/rng.hpp"
#include "mtgraph/typevec.hpp"

namespace mtg {

struct GraphSample {
  long long n = 0;
  std::vector<long long> counts;       // vertices per type
  std::vector<long long> type_offset;  // type r occupies [offset[r], offset[r]+counts[r])
  std::vector<std::pair<long long, long long>> edges;
  std::uint64_t seed = 0;
  long long pair_draws = 0;  // geometric draws taken; O(n + #edges) by design
};

namespace detail {

/// Decode the i-th pair (a, b), a < b < c, in lexicographic order.
inline std::pair<long long, long long> pair_from_index(long long i, long long c) {
  // T(a) = a (2c - a - 1) / 2 pairs precede row a; invert the quadratic.
  double cd = static_cast<double>(c);
  double disc = (2.0 * cd - 1.0) * (2.0 * cd - 1.0) - 8.0 * static_cast<double>(i);
  long long a = static_cast<long long>((2.0 * cd - 1.0 - std::sqrt(std::max(0.0, disc))) / 2.0);
  auto row_start = [c](long long x) { return x * (2 * c - x - 1) / 2; };
  while (a > 0 && row_start(a) > i) --a;
  while (row_start(a + 1) <= i) ++a;
  return {a, a + 1 + (i - row_start(a))};
}

}  // namespace detail

/// Draw one graph.  Deterministic given (model, seed).
inline GraphSample sample_graph(const Model& model, std::uint64_t seed) {
  const int S = model.S();
  const long long n = model.n();
  GraphSample g;
  g.n = n;
  g.seed = seed;
  g.counts = model.counts;
  g.type_offset.resize(S, 0);
  for (int r = 1; r < S; ++r) g.type_offset[r] = g.type_offset[r - 1] + g.counts[r - 1];

  SplitMix64 rng(seed);
  for (int r = 0; r < S; ++r) {
    for (int s = r; s < S; ++s) {
      double p = model.edge_prob(r, s);
      if (p <= 0.0) continue;
      long long block = (r == s) ? g.counts[r] * (g.counts[r] - 1) / 2 : g.counts[r] * g.counts[s];
      if (block <= 0) continue;
      if (p >= 1.0) {
        for (long long i = 0; i < block; ++i) {
          if (r == s) {
            auto [a, b] = detail::pair_from_index(i, g.counts[r]);
            g.edges.emplace_back(g.type_offset[r] + a, g.type_offset[r] + b);
          } else {
            g.edges.emplace_back(g.type_offset[r] + i / g.counts[s],
                                 g.type_offset[s] + i % g.counts[s]);
          }
        }
        continue;
      }
      double log1m = std::log1p(-p);
      long long pos = -1;
      for (;;) {
        std::uint64_t skip = geometric_skip(rng, log1m);
        ++g.pair_draws;
        if (skip > static_cast<std::uint64_t>(block)) break;  // jumped past the block
        pos += 1 + static_cast<long long>(skip);
        if (pos >= block) break;
        if (r == s) {
          auto [a, b] = detail::pair_from_index(pos, g.counts[r]);
          g.edges.emplace_back(g.type_offset[r] + a, g.type_offset[r] + b);
        } else {
          g.edges.emplace_back(g.type_offset[r] + pos / g.counts[s],
                               g.type_offset[s] + pos % g.counts[s]);
        }
      }
    }
  }
  return g;
}

struct CensusResult {
  std::map<TypeVec, long long> histogram;  // component type-count vector -> multiplicity
  long long num_components = 0;
  TypeVec giant;           // largest component (ties: lexicographically largest vector)
  long long giant_size = 0;
};

/// Component census via union-find.  Checks vertex conservation: summed
/// over components, each type's count must reproduce the model's counts.
inline CensusResult census(const GraphSample& g) {
  const long long n = g.n;
  const int S = static_cast<int>(g.counts.size());
  std::vector<long long> parent(n);
  for (long long i = 0; i < n; ++i) parent[i] = i;
  std::vector<int> rank_(n, 0);
  auto find = [&](long long x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto& e : g.edges) {
    long long a = find(e.first), b = find(e.second);
    if (a == b) continue;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

  auto type_of = [&](long long v) {
    int r = S - 1;
    while (r > 0 && v < g.type_offset[r]) --r;
    return r;
  };
  std::map<long long, TypeVec> comp;
  for (long long v = 0; v < n; ++v) {
    long long root = find(v);
    auto it = comp.find(root);
    if (it == comp.end()) it = comp.emplace(root, TypeVec(S, 0)).first;
    ++it->second[type_of(v)];
  }

  CensusResult res;
  res.num_components = static_cast<long long>(comp.size());
  res.giant.assign(S, 0);
  std::vector<long long> conserved(S, 0);
  for (auto& [root, k] : comp) {
    ++res.histogram[k];
    for (int r = 0; r < S; ++r) conserved[r] += k[r];
    long long sz = total(k);
    if (sz > res.giant_size || (sz == res.giant_size && k > res.giant)) {
      res.giant_size = sz;
      res.giant = k;
    }
  }
  for (int r = 0; r < S; ++r)
    MTG_ASSERT(conserved[r] == g.counts[r], "census must conserve vertex counts per type");
  return res;
}

struct ReplicateStats {
  std::uint64_t seed = 0;
  long long num_components = 0;
  long long num_edges = 0;
  long long pair_draws = 0;
  long long giant_size = 0;
  TypeVec giant;
  std::vector<long long> tracked;  // multiplicities of the tracked component vectors
};

/// Run R independent replicates (streams split from master_seed), optionally
/// in parallel.  Results are returned in replicate-index order and any
/// reduction downstream must consume them in that order, so the output is
/// byte-identical for every thread count.
inline std::vector<ReplicateStats> run_batch(const Model& model, long long replicates,
                                             std::uint64_t master_seed,
                                             const std::vector<TypeVec>& tracked_ks,
                                             int threads = 1) {
  if (replicates < 0) throw ValidationError("BadArgument", "replicates must be nonnegative");
  std::vector<ReplicateStats> out(static_cast<std::size_t>(replicates));
  if (threads < 1) threads = 1;
  std::atomic<long long> next{0};
  auto worker = [&]() {
    for (;;) {
      long long i = next.fetch_add(1);
      if (i >= replicates) return;
      std::uint64_t seed = stream_seed(master_seed, static_cast<std::uint64_t>(i));
      GraphSample g = sample_graph(model, seed);
      CensusResult c = census(g);
      ReplicateStats st;
      st.seed = seed;
      st.num_components = c.num_components;
      st.num_edges = static_cast<long long>(g.edges.size());
      st.pair_draws = g.pair_draws;
      st.giant_size = c.giant_size;
      st.giant = c.giant;
      st.tracked.reserve(tracked_ks.size());
      for (auto& k : tracked_ks) {
        auto it = c.histogram.find(k);
        st.tracked.push_back(it == c.histogram.end() ? 0 : it->second);
      }
      out[static_cast<std::size_t>(i)] = std::move(st);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace mtg
