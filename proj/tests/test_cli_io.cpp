// Configuration grammar, type-vector parsing, run manifests, digests, and
// the environment seed override.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <string>

#include "mtgraph/config.hpp"
#include "mtgraph/manifest.hpp"
#include "mtgraph/typevec.hpp"

using Catch::Approx;

TEST_CASE("config grammar: scalars, vectors, matrices, lists, comments") {
  const std::string text =
      "# model description\n"
      "n = 100\n"
      "scale = 2.5   # trailing comment\n"
      "mu = [0.25, 0.75]\n"
      "kappa = [1.0, 2.0; 2.0, 0.5]\n"
      "types = [left, right]\n";
  mtg::Config c = mtg::Config::parse_string(text);
  REQUIRE(c.get_int("n") == 100);
  REQUIRE(c.get_real("scale") == Approx(2.5));
  REQUIRE(c.get_vector("mu") == std::vector<double>{0.25, 0.75});
  auto k = c.get_matrix("kappa");
  REQUIRE(k.size() == 2);
  REQUIRE(k[0] == std::vector<double>{1.0, 2.0});
  REQUIRE(k[1] == std::vector<double>{2.0, 0.5});
  REQUIRE(c.get_string_list("types") == std::vector<std::string>{"left", "right"});
  REQUIRE(c.raw_text() == text);
}

TEST_CASE("config grammar: malformed input is rejected with codes") {
  // Structure errors surface at parse time; typed-value errors surface at
  // the typed accessor.
  CHECK_THROWS_AS(mtg::Config::parse_string("novalue\n"), mtg::ValidationError);
  mtg::Config ragged = mtg::Config::parse_string("x = [1, 2; 3]\n");
  CHECK_THROWS_AS(ragged.get_matrix("x"), mtg::ValidationError);
  mtg::Config holes = mtg::Config::parse_string("x = [1, , 2]\n");
  CHECK_THROWS_AS(holes.get_matrix("x"), mtg::ValidationError);
  mtg::Config c = mtg::Config::parse_string("x = [1, 2]\nn = oops\n");
  CHECK_THROWS_AS(c.get_int("n"), mtg::ValidationError);
  CHECK_THROWS_AS(c.get_matrix("missing"), mtg::ValidationError);
  CHECK_THROWS_AS(mtg::Config::parse_file("/nonexistent/path.cfg"), mtg::ValidationError);
}

TEST_CASE("type-vector parsing and formatting") {
  REQUIRE(mtg::parse_typevec("2,1,0") == mtg::TypeVec{2, 1, 0});
  REQUIRE(mtg::parse_typevec(" 3 , 4 ") == mtg::TypeVec{3, 4});
  REQUIRE(mtg::to_string(mtg::TypeVec{2, 1, 0}) == "2,1,0");
  CHECK_THROWS_AS(mtg::parse_typevec(""), mtg::ValidationError);
  CHECK_THROWS_AS(mtg::parse_typevec("1,x"), mtg::ValidationError);
  CHECK_THROWS_AS(mtg::parse_typevec("1,-2"), mtg::ValidationError);
}

TEST_CASE("box walking visits every lattice point exactly once") {
  mtg::TypeVec cap{2, 3};
  mtg::TypeVec k(2, 0);
  int visited = 0;
  while (mtg::next_in_box(k, cap)) ++visited;
  REQUIRE(visited == (2 + 1) * (3 + 1) - 1);  // all points except the start
}

TEST_CASE("shells enumerate compositions of m into S parts") {
  auto s = mtg::shell(2, 3);
  REQUIRE(s.size() == 4);  // (3,0) (2,1) (1,2) (0,3)
  for (auto& k : s) REQUIRE(mtg::total(k) == 3);
  REQUIRE(mtg::shell(3, 2).size() == 6);  // C(2+2,2)
}

TEST_CASE("manifest JSON carries every provenance field with stable keys") {
  mtg::RunManifest man;
  man.command = "mtg dual solve --model demo.cfg";
  man.model_digest = "00ff00ff00ff00ff";
  man.master_seed = 77;
  man.seed_from_env = false;
  man.timestamp = "2026-01-02T03:04:05Z";
  mtg::ordered_json j = man.to_json();
  REQUIRE(j["tool"] == "mtg");
  REQUIRE(j["version"] == mtg::kVersion);
  REQUIRE(j["command"] == man.command);
  REQUIRE(j["prng"] == "splitmix64");
  REQUIRE(j["master_seed"] == 77);
  REQUIRE(j["seed_from_env"] == false);
  REQUIRE(j["model_digest"] == man.model_digest);
  REQUIRE(j["timestamp"] == man.timestamp);
  // Round trip: parse(emit(x)) = x.
  mtg::ordered_json back = mtg::ordered_json::parse(j.dump(2));
  REQUIRE(back == j);
}

TEST_CASE("text digest is stable and content-sensitive") {
  std::string a = "kappa = [2]\nmu = [1]\nn = 5\n";
  REQUIRE(mtg::text_digest(a) == mtg::text_digest(a));
  REQUIRE(mtg::text_digest(a).size() == 16);
  REQUIRE(mtg::text_digest(a) != mtg::text_digest(a + " "));
}

TEST_CASE("environment seed override: absent, valid, and malformed") {
  unsetenv("MTGL_SEED");
  std::uint64_t seed = 5;
  REQUIRE_FALSE(mtg::env_seed(seed));
  REQUIRE(seed == 5);

  setenv("MTGL_SEED", "123", 1);
  REQUIRE(mtg::env_seed(seed));
  REQUIRE(seed == 123);

  setenv("MTGL_SEED", "0x10", 1);  // base-0 parse accepts hex
  REQUIRE(mtg::env_seed(seed));
  REQUIRE(seed == 16);

  setenv("MTGL_SEED", "noise", 1);
  CHECK_THROWS_AS(mtg::env_seed(seed), mtg::ValidationError);
  unsetenv("MTGL_SEED");
}

TEST_CASE("ISO timestamps have the fixed UTC shape") {
  std::string ts = mtg::iso_timestamp_utc();
  REQUIRE(ts.size() == 20);
  REQUIRE(ts[4] == '-');
  REQUIRE(ts[10] == 'T');
  REQUIRE(ts.back() == 'Z');
}
