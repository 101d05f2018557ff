// The compound-Poisson component law at finite n: jump weights, census
// probabilities, the terminal-probability identity (two independent routes),
// total-variation distance between the conditioned graph census and the
// conditional compound-Poisson census, and the limiting jump law.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "mtgraph/config.hpp"
#include "mtgraph/cpp_law.hpp"
#include "mtgraph/dual.hpp"
#include "mtgraph/model.hpp"

using Catch::Approx;

namespace {

mtg::Model make_model(const std::string& text) {
  return mtg::model_from_config(mtg::Config::parse_string(text));
}

double as_double(mtg::dd v) { return static_cast<double>(v); }

}  // namespace

TEST_CASE("jump weights at n=3, mean degree 1: frozen 40-digit references") {
  mtg::Model m = make_model("kappa = [1]\nmu = [1]\nn = 3\n");
  mtg::JumpLaw law = mtg::jump_law(m, {1.0});
  REQUIRE(law.ks.size() == 3);
  REQUIRE_FALSE(law.truncated);
  std::map<mtg::TypeVec, mtg::dd> w;
  for (std::size_t i = 0; i < law.ks.size(); ++i) w[law.ks[i]] = law.w[i];
  REQUIRE(as_double(w[{1}]) == Approx(0.3628873693012115701033).epsilon(1e-14));
  REQUIRE(as_double(w[{2}]) == Approx(8.0 / 81.0).epsilon(1e-14));
  REQUIRE(as_double(w[{3}]) == Approx(0.06272127370638224668452).epsilon(1e-14));
  REQUIRE(as_double(law.Z) == Approx(0.5243740751063592488866).epsilon(1e-14));
}

TEST_CASE("terminal probability: formula and convolution routes coincide") {
  // All-singletons census at n=3, kappa=1.  Two fully independent routes:
  // the closed-form product and the Poisson convolution of jump weights.
  mtg::Model m = make_model("kappa = [1]\nmu = [1]\nn = 3\n");
  mtg::TerminalReport t = mtg::terminal_prob(m, {1.0});
  REQUIRE(t.p_formula == Approx(0.1505232359479652466645).epsilon(1e-13));
  REQUIRE(t.p_convolution == Approx(t.p_formula).epsilon(1e-13));
  REQUIRE(t.rel_gap <= 1e-12);
  REQUIRE(t.p_keep == Approx(1.0));
}

TEST_CASE("terminal probability under a restrictive box: frozen references") {
  // n=4, kappa=1.5, box alpha=1/2 keeps only components with at most 2
  // vertices; the keep-probability and the terminal value are both frozen.
  mtg::Model m = make_model("kappa = [1.5]\nmu = [1]\nn = 4\n");
  mtg::TerminalReport t = mtg::terminal_prob(m, {0.5});
  REQUIRE(t.p_keep == Approx(0.33855438232421875).epsilon(1e-13));
  REQUIRE(t.z == Approx(0.237713594675804403).epsilon(1e-12));
  REQUIRE(t.p_formula == Approx(0.032489759185736645).epsilon(1e-12));
  REQUIRE(t.p_convolution == Approx(t.p_formula).epsilon(1e-12));
}

TEST_CASE("terminal probability for a two-type kernel: frozen references") {
  mtg::Model m = make_model("kappa = [1, 3; 3, 1]\nmu = [0.5, 0.5]\nn = 4\n");
  mtg::TerminalReport t = mtg::terminal_prob(m, {1.0, 1.0});
  REQUIRE(t.z == Approx(0.182119660819804169).epsilon(1e-12));
  REQUIRE(t.p_formula == Approx(0.00238611199874944172).epsilon(1e-12));
  REQUIRE(t.p_convolution == Approx(t.p_formula).epsilon(1e-12));
}

TEST_CASE("census law at n=3, mean degree 1: the three partitions of 3") {
  // Partitions {1,1,1}, {2,1}, {3} carry graph probabilities 8/27, 12/27, 7/27.
  mtg::Model m = make_model("kappa = [1]\nmu = [1]\nn = 3\n");
  mtg::CensusLaw law = mtg::census_law_exact(m);
  REQUIRE(law.configs.size() == 3);
  REQUIRE(as_double(law.total) == Approx(1.0).epsilon(1e-14));
  // Key each configuration by its total component count (parts store
  // shape -> multiplicity, so sum the multiplicities).
  std::map<long long, double> by_blocks;
  for (std::size_t i = 0; i < law.configs.size(); ++i) {
    long long blocks = 0;
    for (auto& [shape, mult] : law.configs[i].parts) blocks += mult;
    by_blocks[blocks] = as_double(law.prob[i]);
  }
  REQUIRE(by_blocks[3] == Approx(8.0 / 27.0).epsilon(1e-13));   // three singletons
  REQUIRE(by_blocks[2] == Approx(12.0 / 27.0).epsilon(1e-13));  // a pair and a singleton
  REQUIRE(by_blocks[1] == Approx(7.0 / 27.0).epsilon(1e-13));   // one 3-vertex block
}

TEST_CASE("representation identity: TV distance collapses at machine-dd level") {
  // Unconditioned boxes and restrictive boxes, one and two types.  The graph
  // census law and the conditioned compound-Poisson census law are the same
  // distribution; total variation certifies it at the 1e-12 scale demanded,
  // and in practice lands near 1e-28.
  struct Fixture {
    std::string cfg;
    std::vector<double> alpha;
  };
  std::vector<Fixture> fixtures = {
      {"kappa = [1]\nmu = [1]\nn = 3\n", {1.0}},
      {"kappa = [1.5]\nmu = [1]\nn = 4\n", {0.5}},
      {"kappa = [1, 3; 3, 1]\nmu = [0.5, 0.5]\nn = 4\n", {1.0, 1.0}},
      {"kappa = [0.8, 0.3; 0.3, 1.2]\nmu = "
       "[0.3333333333333333, 0.6666666666666667]\nn = 3\n",
       {0.34, 0.34}},
  };
  for (const auto& f : fixtures) {
    mtg::Model m = make_model(f.cfg);
    mtg::TerminalReport t = mtg::verify_representation(m, f.alpha);
    CAPTURE(f.cfg, f.alpha);
    REQUIRE(t.tv >= 0.0);
    REQUIRE(t.tv <= 1e-12);
    REQUIRE(t.rel_gap <= 1e-12);
  }
}

TEST_CASE("census law refuses sizes where enumeration would explode") {
  mtg::Model m = make_model("kappa = [1]\nmu = [1]\nn = 13\n");
  CHECK_THROWS_AS(mtg::census_law_exact(m), mtg::ValidationError);
}

TEST_CASE("jump law validates the box fractions") {
  mtg::Model m = make_model("kappa = [1]\nmu = [1]\nn = 10\n");
  CHECK_THROWS_AS(mtg::jump_law(m, {0.0}), mtg::ValidationError);
  CHECK_THROWS_AS(mtg::jump_law(m, {1.5}), mtg::ValidationError);
  CHECK_THROWS_AS(mtg::jump_law(m, {0.5, 0.5}), mtg::ValidationError);
}

TEST_CASE("limiting jump law: subcritical mean, spread, and tail control") {
  // kappa = 1/2: q = 3/4, m = c/q = 4/3, Psi = Phi/q = 8/3.
  mtg::Model m = make_model("kappa = [0.5]\nmu = [1]\nn = 100\n");
  mtg::DualSolution d = mtg::solve_dual(m);
  mtg::LimitLaw law = mtg::limit_jump_law(m, d);
  REQUIRE(law.q == Approx(0.75).epsilon(1e-12));
  REQUIRE(law.mean(0) == Approx(4.0 / 3.0).margin(1e-9));
  REQUIRE(law.psi(0, 0) == Approx(8.0 / 3.0).epsilon(1e-12));
  REQUIRE(law.tail_estimate <= 1e-10);
  // Probabilities sum to one after normalization by q.
  double tot = 0.0;
  for (double p : law.prob) tot += p;
  REQUIRE(tot == Approx(1.0).margin(1e-9));
  // Some exponential moment is certified.
  REQUIRE(law.eta > 0.0);
  REQUIRE(law.exp_moment > 1.0);
}

TEST_CASE("limiting jump law: supercritical case integrates h against q") {
  mtg::Model m = make_model("kappa = [2]\nmu = [1]\nn = 100\n");
  mtg::DualSolution d = mtg::solve_dual(m);
  mtg::LimitLaw law = mtg::limit_jump_law(m, d);
  REQUIRE(law.q == Approx(0.1619025594729787149118).epsilon(1e-12));
  REQUIRE(law.mean(0) == Approx(0.2031878699799799538385 / 0.1619025594729787149118)
                             .margin(1e-8));
  double tot = 0.0;
  for (double p : law.prob) tot += p;
  REQUIRE(tot == Approx(1.0).margin(1e-8));
}

TEST_CASE("alias-table sampling reproduces the target distribution") {
  std::vector<double> probs{0.5, 0.2, 0.2, 0.1};
  mtg::AliasTable table(probs);
  mtg::SplitMix64 g(31);
  std::vector<long long> counts(4, 0);
  const int N = 400000;
  for (int i = 0; i < N; ++i) ++counts[table.draw(g)];
  for (int i = 0; i < 4; ++i) {
    double freq = static_cast<double>(counts[i]) / N;
    double se = std::sqrt(probs[i] * (1 - probs[i]) / N);
    REQUIRE(freq == Approx(probs[i]).margin(4.5 * se));
  }
}

TEST_CASE("compound-Poisson sampler: mean count matches lambda") {
  mtg::Model m = make_model("kappa = [0.5]\nmu = [1]\nn = 50\n");
  mtg::DualSolution d = mtg::solve_dual(m);
  mtg::LimitLaw law = mtg::limit_jump_law(m, d);
  const double lambda = 2.4;
  const int R = 30000;
  double total_jumps = 0.0;
  for (int i = 0; i < R; ++i) {
    std::map<mtg::TypeVec, long long> draw = mtg::sample_cpp(law.ks, law.prob, lambda, 7000 + i);
    for (auto& [k, cnt] : draw) total_jumps += static_cast<double>(cnt);
  }
  double se = std::sqrt(lambda / R);
  REQUIRE(total_jumps / R == Approx(lambda).margin(4 * se));
}
