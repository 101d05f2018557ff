// Weighted spanning-tree counts (log-determinant vs direct enumeration),
// the limiting cluster weights h(k), and the truncated mass identities.

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "mtgraph/config.hpp"
#include "mtgraph/dual.hpp"
#include "mtgraph/model.hpp"
#include "mtgraph/tree.hpp"

using Catch::Approx;

namespace {

mtg::Model make_model(const std::string& text) {
  return mtg::model_from_config(mtg::Config::parse_string(text));
}

}  // namespace

TEST_CASE("tau on single vertices and unweighted complete graphs") {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  // A single vertex has exactly one (empty) spanning tree.
  REQUIRE(mtg::tau_log({1}, one) == Approx(0.0).margin(1e-12));
  // Unit kernel, k vertices of one type: Cayley's count k^{k-2}.
  for (int k = 2; k <= 8; ++k) {
    double expect = (k - 2) * std::log(static_cast<double>(k));
    REQUIRE(mtg::tau_log({k}, one) == Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("tau with a weighted two-type kernel, checked by hand") {
  // k = (2,1), kappa = [[1.3, 0.7], [0.7, 1.3]].  Three labeled trees:
  // path a1-a2-b (1.3*0.7), path a2-a1-b (1.3*0.7), star at b (0.7*0.7).
  Eigen::MatrixXd K(2, 2);
  K << 1.3, 0.7, 0.7, 1.3;
  double expect = 2 * 1.3 * 0.7 + 0.49;
  REQUIRE(std::exp(mtg::tau_log({2, 1}, K)) == Approx(expect).epsilon(1e-12));
  REQUIRE(mtg::tau_enum({2, 1}, K) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("log-determinant tau equals direct enumeration on random kernels") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.2, 2.5);
  std::uniform_int_distribution<int> D(0, 3);
  for (int trial = 0; trial < 40; ++trial) {
    int S = 1 + static_cast<int>(rng() % 3);
    Eigen::MatrixXd K(S, S);
    for (int i = 0; i < S; ++i)
      for (int j = i; j < S; ++j) K(i, j) = K(j, i) = U(rng);
    mtg::TypeVec k(S, 0);
    long long tot = 0;
    while (tot == 0) {
      for (int s = 0; s < S; ++s) tot += (k[s] = D(rng));
    }
    if (tot > 7) continue;
    double a = std::exp(mtg::tau_log(k, K));
    double b = mtg::tau_enum(k, K);
    REQUIRE(a == Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("cluster weight h(k): single-type references and both assembled forms") {
  mtg::Model m = make_model("kappa = [2]\nmu = [1]\nn = 10\n");
  mtg::DualSolution d = mtg::solve_dual(m);
  // h(1) = e^{-2}, h(2) = 2 e^{-4} / 2! (40-digit references).
  mtg::ClusterWeight h1 = mtg::h_value({1}, m, d);
  mtg::ClusterWeight h2 = mtg::h_value({2}, m, d);
  REQUIRE(h1.h == Approx(0.135335283236612691894).epsilon(1e-14));
  REQUIRE(h2.h == Approx(0.01831563888873418029372).epsilon(1e-14));
  // The dual assembly c/(kappa c) gives the same value — the fixed point at work.
  REQUIRE(h1.h_dual == Approx(h1.h).epsilon(1e-12));
  REQUIRE(h2.h_dual == Approx(h2.h).epsilon(1e-12));

  mtg::Model msub = make_model("kappa = [0.5]\nmu = [1]\nn = 10\n");
  mtg::DualSolution dsub = mtg::solve_dual(msub);
  REQUIRE(mtg::h_value({1}, msub, dsub).h == Approx(0.6065306597126334236038).epsilon(1e-14));
  REQUIRE(mtg::h_value({2}, msub, dsub).h == Approx(0.09196986029286058039888).epsilon(1e-14));
}

TEST_CASE("cluster weight h(k): two-type references") {
  mtg::Model m = make_model("kappa = [1, 3; 3, 1]\nmu = [0.5, 0.5]\nn = 10\n");
  mtg::DualSolution d = mtg::solve_dual(m);
  REQUIRE(mtg::h_value({1, 0}, m, d).h == Approx(0.0676676416183063459).epsilon(1e-13));
  REQUIRE(mtg::h_value({2, 0}, m, d).h == Approx(0.00228945486109177254).epsilon(1e-13));
  REQUIRE(mtg::h_value({1, 1}, m, d).h == Approx(0.0137367291665506352).epsilon(1e-13));
  // Symmetry of this fixture swaps coordinates freely.
  REQUIRE(mtg::h_value({0, 1}, m, d).h == Approx(mtg::h_value({1, 0}, m, d).h).epsilon(1e-13));
  CHECK_THROWS_AS(mtg::h_value({0, 0}, m, d), mtg::ValidationError);
}

TEST_CASE("mass identities: subcritical single type sums to (q, c, Phi)") {
  // kappa = 1/2: q = 3/4, c = 1, Phi = (1/c - kappa)^{-1} = 2.
  mtg::Model m = make_model("kappa = [0.5]\nmu = [1]\nn = 10\n");
  mtg::DualSolution d = mtg::solve_dual(m);
  mtg::MassIdentities mi = mtg::mass_identities(m, d, 1e-8);
  REQUIRE(mi.tail_estimate <= 1e-8);
  REQUIRE(mi.sum_h == Approx(0.75).margin(2e-8));
  REQUIRE(mi.sum_kh(0) == Approx(1.0).margin(2e-8));
  REQUIRE(mi.phi_truncated(0, 0) == Approx(2.0).margin(2e-8));
  Eigen::MatrixXd phi = mtg::phi_closed(m, d);
  REQUIRE(phi(0, 0) == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("mass identities: supercritical dual and a two-type kernel") {
  mtg::Model m1 = make_model("kappa = [2]\nmu = [1]\nn = 10\n");
  mtg::DualSolution d1 = mtg::solve_dual(m1);
  mtg::MassIdentities a = mtg::mass_identities(m1, d1, 1e-8);
  REQUIRE(a.sum_h == Approx(d1.q).margin(2e-8));
  REQUIRE(a.sum_kh(0) == Approx(d1.c(0)).margin(2e-8));
  REQUIRE(a.phi_truncated(0, 0) == Approx(0.3422836357231675226067).margin(2e-8));
  REQUIRE(mtg::phi_closed(m1, d1)(0, 0) == Approx(0.3422836357231675226067).epsilon(1e-12));

  // Two-type supercritical kernel; the dual tilt makes the shell sums decay
  // at rate ~0.74, well inside the geometric-truncation guard.
  mtg::Model m2 = make_model("kappa = [1, 3; 3, 1]\nmu = [0.5, 0.5]\nn = 10\n");
  mtg::DualSolution d2 = mtg::solve_dual(m2);
  mtg::MassIdentities b = mtg::mass_identities(m2, d2, 1e-7);
  Eigen::MatrixXd phi2 = mtg::phi_closed(m2, d2);
  REQUIRE(b.sum_h == Approx(d2.q).margin(2e-7));
  for (int r = 0; r < 2; ++r) {
    REQUIRE(b.sum_kh(r) == Approx(d2.c(r)).margin(2e-7));
    for (int s = 0; s < 2; ++s) REQUIRE(b.phi_truncated(r, s) == Approx(phi2(r, s)).margin(2e-7));
  }
}

TEST_CASE("tau is invariant under the choice of deleted cofactor row") {
  // The matrix-tree construction must not depend on which vertex anchors the
  // cofactor; permuting the type-count vector back and forth exposes this.
  Eigen::MatrixXd K(3, 3);
  K << 1.0, 0.4, 0.9, 0.4, 2.0, 0.6, 0.9, 0.6, 1.5;
  mtg::TypeVec k{2, 1, 3};
  double base = mtg::tau_log(k, K);
  // Relabel types by a permutation and permute the kernel accordingly.
  const int p[3] = {2, 0, 1};
  Eigen::MatrixXd KP(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) KP(i, j) = K(p[i], p[j]);
  mtg::TypeVec kp{k[p[0]], k[p[1]], k[p[2]]};
  REQUIRE(mtg::tau_log(kp, KP) == Approx(base).epsilon(1e-12));
  REQUIRE(std::exp(base) == Approx(mtg::tau_enum(k, K)).epsilon(1e-10));
}
