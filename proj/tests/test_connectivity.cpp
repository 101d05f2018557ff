// Exact connection probabilities: the anchored recursion against the
// brute-force edge-subset oracle, hand-computed small cases, anchor
// independence, and the closed-form bounds.

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "mtgraph/conn.hpp"

using Catch::Approx;

TEST_CASE("connection probability of K2/K3/K4 against pencil-and-paper values") {
  // One vertex is connected with probability 1; two vertices need their edge.
  Eigen::MatrixXd K(1, 1);
  const long long n = 10;
  K << 1.0;  // p = 0.1
  REQUIRE(mtg::p_conn_exact({1}, n, K).value == Approx(1.0));
  REQUIRE(mtg::p_conn_exact({2}, n, K).value == Approx(0.1).epsilon(1e-14));
  // Three vertices, p = 0.1: p^3 + 3 p^2 (1-p) = 0.028.
  REQUIRE(mtg::p_conn_exact({3}, n, K).value == Approx(0.028).epsilon(1e-13));
  // Four vertices, p = 0.3: 16p^3 - 33p^4 + 24p^5 - 6p^6.
  Eigen::MatrixXd K3(1, 1);
  K3 << 3.0;  // p = 0.3
  double p = 0.3;
  double expect = 16 * std::pow(p, 3) - 33 * std::pow(p, 4) + 24 * std::pow(p, 5) -
                  6 * std::pow(p, 6);
  REQUIRE(mtg::p_conn_exact({4}, n, K3).value == Approx(expect).epsilon(1e-13));
  REQUIRE(mtg::p_conn_brute({4}, n, K3).value == Approx(expect).epsilon(1e-13));
}

TEST_CASE("anchored recursion equals the brute-force oracle on random inputs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.2, 3.5);
  std::uniform_int_distribution<int> N(4, 40);
  for (int trial = 0; trial < 60; ++trial) {
    int S = 1 + static_cast<int>(rng() % 2);
    Eigen::MatrixXd K(S, S);
    for (int i = 0; i < S; ++i)
      for (int j = i; j < S; ++j) K(i, j) = K(j, i) = U(rng);
    long long n = N(rng);
    mtg::TypeVec k(S, 0);
    long long tot = 0;
    while (tot == 0 || tot > 6) {
      tot = 0;
      for (int s = 0; s < S; ++s) tot += (k[s] = static_cast<int>(rng() % 4));
    }
    double a = mtg::p_conn_exact(k, n, K).value;
    double b = mtg::p_conn_brute(k, n, K).value;
    REQUIRE(a == Approx(b).margin(1e-12));
  }
}

TEST_CASE("recursion value does not depend on the anchor type") {
  // The anchored table must give one answer no matter which argmax wins;
  // permuting types moves the anchor while preserving the probability.
  Eigen::MatrixXd K(2, 2);
  K << 1.2, 0.8, 0.8, 2.1;
  Eigen::MatrixXd KP(2, 2);
  KP << 2.1, 0.8, 0.8, 1.2;
  const long long n = 30;
  double a = mtg::p_conn_exact({3, 3}, n, K).value;   // tie: anchor = type 0
  double b = mtg::p_conn_exact({3, 3}, n, KP).value;  // swapped labels
  // The recursion forms 1 - (sum near 1), so double precision caps agreement
  // at absolute ~1e-15 regardless of how small the probability itself is.
  REQUIRE(a == Approx(b).margin(1e-12));
}

TEST_CASE("clamped edge probabilities (kappa >= n) stay in [0,1] and agree") {
  Eigen::MatrixXd K(1, 1);
  K << 7.0;
  const long long n = 5;  // p = 1: every pair wired, always connected
  REQUIRE(mtg::p_conn_exact({4}, n, K).value == Approx(1.0));
  REQUIRE(mtg::p_conn_brute({4}, n, K).value == Approx(1.0));
}

TEST_CASE("closed-form bounds on the single-type reference point") {
  // k = 5, kappa = 2, n = 50 — frozen with 40-digit arithmetic.
  Eigen::MatrixXd K(1, 1);
  K << 2.0;
  mtg::TypeVec k{5};
  const long long n = 50;
  mtg::ConnBounds b = mtg::p_conn_bounds(k, n, K);
  REQUIRE(b.anchor == 0);
  REQUIRE(b.meso_upper == Approx(0.00032).epsilon(1e-12));
  REQUIRE(b.est_lower == Approx(0.00019210576203295172241).epsilon(1e-12));
  REQUIRE(b.est_upper == Approx(0.00032).epsilon(1e-12));
  REQUIRE(b.esti2p_upper == Approx(0.0012123416817494785927).epsilon(1e-11));
  double exact = mtg::p_conn_exact(k, n, K).value;
  REQUIRE(b.est_lower <= exact * (1 + 1e-12));
  REQUIRE(exact <= b.est_upper * (1 + 1e-12));
}

TEST_CASE("tree-sum sandwich holds across random kernels and sizes") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.3, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    int S = 1 + static_cast<int>(rng() % 2);
    Eigen::MatrixXd K(S, S);
    for (int i = 0; i < S; ++i)
      for (int j = i; j < S; ++j) K(i, j) = K(j, i) = U(rng);
    long long n = 20 + static_cast<long long>(rng() % 40);
    mtg::TypeVec k(S, 0);
    long long tot = 0;
    while (tot < 2 || tot > 6) {
      tot = 0;
      for (int s = 0; s < S; ++s) tot += (k[s] = static_cast<int>(rng() % 4));
    }
    mtg::ConnBounds b = mtg::p_conn_bounds(k, n, K);
    double exact = mtg::p_conn_exact(k, n, K).value;
    REQUIRE(b.est_lower <= exact * (1 + 1e-10));
    REQUIRE(exact <= b.est_upper * (1 + 1e-10));
    REQUIRE(exact <= b.meso_upper * (1 + 1e-10));
  }
}

TEST_CASE("binomial-tail comparison bound: frozen value and preconditions") {
  Eigen::MatrixXd K(2, 2);
  K << 1.0, 3.0, 3.0, 1.0;
  const long long n = 20;
  // k = (1,2) against the enclosing box m = (2,3), anchored at type 0.
  double v = mtg::binom_upper({1, 2}, n, K, 0, {2, 3});
  REQUIRE(v == Approx(0.63306915258678831565).epsilon(1e-12));
  // Anchored coordinate must satisfy k_r <= 1, and m must dominate k.
  CHECK_THROWS_AS(mtg::binom_upper({2, 2}, n, K, 0, {3, 3}), mtg::ValidationError);
  CHECK_THROWS_AS(mtg::binom_upper({1, 2}, n, K, 0, {1, 1}), mtg::ValidationError);
}

TEST_CASE("brute-force oracle rejects oversized inputs") {
  Eigen::MatrixXd K(1, 1);
  K << 1.0;
  CHECK_THROWS_AS(mtg::p_conn_brute({7}, 50, K), mtg::ValidationError);
}

TEST_CASE("full-box table serves every sub-vector consistently") {
  Eigen::MatrixXd K(2, 2);
  K << 1.5, 0.6, 0.6, 1.1;
  const long long n = 25;
  mtg::ConnTableDD table({3, 2}, n, K);
  mtg::TypeVec sub{2, 1};
  double from_table = static_cast<double>(table.at(sub));
  double direct = mtg::p_conn_exact(sub, n, K).value;
  REQUIRE(from_table == Approx(direct).epsilon(1e-13));
}
