// Graph sampling: determinism, census correctness on hand-traceable seeds,
// vertex conservation, edge-count moments, giant tie-breaking, thread-count
// invariance of batches, and the branching-process comparison.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "mtgraph/branching.hpp"
#include "mtgraph/config.hpp"
#include "mtgraph/dual.hpp"
#include "mtgraph/graph_sim.hpp"
#include "mtgraph/model.hpp"
#include "mtgraph/numerics.hpp"
#include "mtgraph/tree.hpp"

using Catch::Approx;

namespace {

mtg::Model make_model(const std::string& text) {
  return mtg::model_from_config(mtg::Config::parse_string(text));
}

}  // namespace

TEST_CASE("sampling is a pure function of model and seed") {
  mtg::Model m = make_model("kappa = [1, 3; 3, 1]\nmu = [0.5, 0.5]\nn = 200\n");
  mtg::GraphSample a = mtg::sample_graph(m, 99);
  mtg::GraphSample b = mtg::sample_graph(m, 99);
  mtg::GraphSample c = mtg::sample_graph(m, 100);
  REQUIRE(a.edges == b.edges);
  REQUIRE(a.pair_draws == b.pair_draws);
  REQUIRE(a.edges != c.edges);
}

TEST_CASE("edges land in valid blocks with valid endpoints") {
  mtg::Model m = make_model("kappa = [1, 2; 2, 0.5]\nmu = [0.25, 0.75]\nn = 100\n");
  mtg::GraphSample g = mtg::sample_graph(m, 5);
  REQUIRE(g.n == 100);
  for (auto& e : g.edges) {
    REQUIRE(e.first >= 0);
    REQUIRE(e.second >= 0);
    REQUIRE(e.first < g.n);
    REQUIRE(e.second < g.n);
    REQUIRE(e.first != e.second);
  }
  // No duplicate pairs: the skip walk visits each unordered pair at most once.
  auto edges = g.edges;
  std::sort(edges.begin(), edges.end());
  REQUIRE(std::adjacent_find(edges.begin(), edges.end()) == edges.end());
}

TEST_CASE("census on a hand-built graph") {
  mtg::Model m = make_model("kappa = [1, 1; 1, 1]\nmu = [0.5, 0.5]\nn = 6\n");
  // Vertices 0,1,2 of type 0 and 3,4,5 of type 1.  Wire {0,3}, {3,1}, {4,5}:
  // components {0,1,3} -> (2,1), {4,5} -> (0,2), {2} -> (1,0).
  mtg::GraphSample g;
  g.n = 6;
  g.counts = {3, 3};
  g.type_offset = {0, 3};
  g.edges = {{0, 3}, {3, 1}, {4, 5}};
  mtg::CensusResult c = mtg::census(g);
  REQUIRE(c.num_components == 3);
  REQUIRE(c.histogram.at({2, 1}) == 1);
  REQUIRE(c.histogram.at({0, 2}) == 1);
  REQUIRE(c.histogram.at({1, 0}) == 1);
  REQUIRE(c.giant == mtg::TypeVec{2, 1});
  REQUIRE(c.giant_size == 3);
}

TEST_CASE("giant tie-break prefers the lexicographically larger census vector") {
  mtg::Model m = make_model("kappa = [1, 1; 1, 1]\nmu = [0.5, 0.5]\nn = 8\n");
  mtg::GraphSample g;
  g.n = 8;
  g.counts = {4, 4};
  g.type_offset = {0, 4};
  // Components {0,1,4} = (2,1) and {2,5,6} = (1,2), both of size 3.
  g.edges = {{0, 1}, {1, 4}, {2, 5}, {5, 6}};
  mtg::CensusResult c = mtg::census(g);
  REQUIRE(c.giant_size == 3);
  REQUIRE(c.giant == mtg::TypeVec{2, 1});
}

TEST_CASE("census conserves every type count over random samples") {
  mtg::Model m = make_model(
      "kappa = [2, 0.4; 0.4, 1]\nmu = [0.3333333333333333, 0.6666666666666667]\nn = 150\n");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    mtg::GraphSample g = mtg::sample_graph(m, seed);
    mtg::CensusResult c = mtg::census(g);  // census itself asserts conservation
    long long total = 0;
    for (auto& [k, cnt] : c.histogram) total += mtg::total(k) * cnt;
    REQUIRE(total == m.n());
  }
}

TEST_CASE("edge count matches the binomial mean within Monte Carlo error") {
  // Single type, p = kappa/n: E[edges] = C(n,2) p, Var = C(n,2) p (1-p).
  mtg::Model m = make_model("kappa = [2]\nmu = [1]\nn = 500\n");
  const double p = 2.0 / 500.0;
  const double pairs = 500.0 * 499.0 / 2.0;
  const int R = 600;
  std::vector<double> edges(R);
  for (int i = 0; i < R; ++i)
    edges[i] = static_cast<double>(mtg::sample_graph(m, 1000 + i).edges.size());
  mtg::MeanVar mv = mtg::mean_var(edges);
  double se = std::sqrt(pairs * p * (1 - p) / R);
  REQUIRE(mv.mean == Approx(pairs * p).margin(4 * se));
}

TEST_CASE("batches are invariant under the worker-thread count") {
  mtg::Model m = make_model("kappa = [1, 3; 3, 1]\nmu = [0.5, 0.5]\nn = 300\n");
  std::vector<mtg::TypeVec> tracked{{1, 0}, {1, 1}};
  auto a = mtg::run_batch(m, 60, 42, tracked, 1);
  auto b = mtg::run_batch(m, 60, 42, tracked, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].seed == b[i].seed);
    REQUIRE(a[i].num_components == b[i].num_components);
    REQUIRE(a[i].num_edges == b[i].num_edges);
    REQUIRE(a[i].giant_size == b[i].giant_size);
    REQUIRE(a[i].tracked == b[i].tracked);
  }
}

TEST_CASE("pair draws scale with edges, not with vertex pairs") {
  mtg::Model m = make_model("kappa = [2]\nmu = [1]\nn = 20000\n");
  mtg::GraphSample g = mtg::sample_graph(m, 3);
  // One skip draw per emitted edge plus at most one per type block.
  long long blocks = 1;
  REQUIRE(g.pair_draws >= static_cast<long long>(g.edges.size()));
  REQUIRE(g.pair_draws <= static_cast<long long>(g.edges.size()) + blocks);
}

TEST_CASE("branching process: explosion frequency matches survival probability") {
  mtg::Model m = make_model("kappa = [2]\nmu = [1]\nn = 1000\n");
  const double survival = 0.7968121300200200461615;  // 1 - c for mean degree 2
  const int R = 4000;
  int exploded = 0;
  for (int i = 0; i < R; ++i)
    if (mtg::sample_gw(m, 0, 500 + i).exploded) ++exploded;
  double freq = static_cast<double>(exploded) / R;
  double se = std::sqrt(survival * (1 - survival) / R);
  REQUIRE(freq == Approx(survival).margin(4 * se));
}

TEST_CASE("branching process: finite family sizes follow the cluster law") {
  // Conditioned on extinction-free sampling, P(total = k) relates to the
  // cluster weights via k h(k) / c.  A chi-square test at 4 bins checks the
  // subcritical single-type case where everything is finite.
  mtg::Model m = make_model("kappa = [0.5]\nmu = [1]\nn = 1000\n");
  mtg::DualSolution d = mtg::solve_dual(m);
  const int R = 20000;
  std::map<long long, int> counts;
  for (int i = 0; i < R; ++i) {
    mtg::GWResult r = mtg::sample_gw(m, 0, 900 + i);
    REQUIRE_FALSE(r.exploded);
    ++counts[std::min<long long>(mtg::total(r.population), 4)];
  }
  // Expected bin masses: P(k) = k h(k) / c for k = 1..3, remainder in bin 4.
  double chi2 = 0.0;
  double falling = 1.0;
  for (long long k = 1; k <= 3; ++k) {
    double pk = static_cast<double>(k) * mtg::h_value({static_cast<int>(k)}, m, d).h / d.c(0);
    double expect = R * pk;
    double got = counts.count(k) ? counts[k] : 0;
    chi2 += (got - expect) * (got - expect) / expect;
    falling -= pk;
  }
  double expect_tail = R * falling;
  double got_tail = counts.count(4) ? counts[4] : 0;
  chi2 += (got_tail - expect_tail) * (got_tail - expect_tail) / expect_tail;
  // 3 degrees of freedom; reject only below the 1e-4 quantile.
  REQUIRE(mtg::chi2_sf(chi2, 3) > 1e-4);
}
