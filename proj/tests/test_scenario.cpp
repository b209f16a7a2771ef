#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "conekit/unit_separability.hpp"
#include "test_support.hpp"

using namespace conekit;
using nlohmann::json;

namespace {

json qubit_doc() {
  return json::parse(R"({
    "hilbert_dim": 2,
    "states": [ [["1","0"],["0","0"]], [["1/2","1/2"],["1/2","1/2"]] ],
    "extra_effects": [ [[1,0],[0,0]] ]
  })");
}

bool mentions(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("loader keeps exact data and completes the effect set") {
  const auto sc = load_scenario(qubit_doc());
  CHECK(sc.exact_available());
  CHECK(sc.states.size() == 2);
  // |0><0|, unit, zero, complement |1><1|
  CHECK(sc.effects.size() == 4);
  REQUIRE(sc.notes.size() == 3);
  CHECK(sc.notes[0] == "inserted the unit effect");
  CHECK(sc.notes[1] == "inserted the zero effect");
  CHECK(mentions(sc.notes[2], "complement of effect 0"));
  validate_scenario(sc);
}

TEST_CASE("floating literals switch Auto to float") {
  auto doc = qubit_doc();
  doc["states"][1] = json::parse("[[0.5, 0.5], [0.5, 0.5]]");
  CHECK_FALSE(load_scenario(doc).exact_available());
  CHECK(load_scenario(doc, ArithmeticPolicy::Exact).exact_available());
  CHECK_FALSE(load_scenario(qubit_doc(), ArithmeticPolicy::Float).exact_available());
}

TEST_CASE("validation names every offending entry") {
  auto doc = qubit_doc();
  doc["states"][0] = json::parse("[[2, 0], [0, 0]]");
  doc["states"][1] = json::parse("[[1.5, 0], [0, -0.5]]");
  try {
    load_scenario(doc);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(mentions(e.what(), "states[0]"));
    CHECK(mentions(e.what(), "states[1]"));
  }
  auto eff = qubit_doc();
  eff["extra_effects"][0] = json::parse("[[1.5, 0], [0, 0]]");
  try {
    load_scenario(eff);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(mentions(e.what(), "effects[0]"));
    CHECK(mentions(e.what(), "I-E"));
  }
}

TEST_CASE("POVM groups must sum to the unit") {
  auto doc = qubit_doc();
  doc["povms"] = json::parse("[[ [[1,0],[0,0]], [[0,0],[0,\"1/2\"]] ]]");
  CHECK_THROWS_AS(load_scenario(doc), ValidationError);
}

TEST_CASE("malformed documents are validation errors") {
  CHECK_THROWS_AS(load_scenario(json::parse("[]")), ValidationError);
  CHECK_THROWS_AS(load_scenario(json::parse(R"({"hilbert_dim": 2})")), ValidationError);
  CHECK_THROWS_AS(load_scenario(json::parse(R"({"hilbert_dim": 2, "states": [[[1]]]})")), ValidationError);
  CHECK_THROWS_AS(load_scenario(json::parse(R"({"mode": "classical", "states": []})")), ValidationError);
  CHECK_THROWS_AS(resolve_scenario("/nonexistent/scenario.json"), ValidationError);
  CHECK_THROWS_AS(builtin_scenario("no_such_builtin"), ValidationError);
}

TEST_CASE("GPT documents") {
  const auto sc = load_scenario(json::parse(R"({
    "mode": "gpt", "space_dim": 2,
    "gpt_states": [[1, 0], [0, 1]],
    "gpt_effects": [[1, 0]],
    "gpt_unit": [1, 1]
  })"));
  CHECK(sc.mode == ScenarioMode::Gpt);
  CHECK(sc.ambient_dim() == 2);
  const auto t = probability_table(sc);
  CHECK(t[0][0] == 1.0);
  CHECK(t[1][0] == 0.0);
}

TEST_CASE("digest is stable and sensitive to content") {
  const auto a = load_scenario(qubit_doc());
  const auto b = load_scenario(qubit_doc());
  CHECK(scenario_digest(a) == scenario_digest(b));
  CHECK(scenario_digest(a).size() == 64);
  auto doc = qubit_doc();
  doc["states"][1] = json::parse(R"([["1/2", ["0", "1/2"]], [["0", "-1/2"], "1/2"]])");
  CHECK(scenario_digest(load_scenario(doc)) != scenario_digest(a));
  // serialization round trip keeps the digest
  CHECK(scenario_digest(load_scenario(scenario_to_json(a))) == scenario_digest(a));
}

TEST_CASE("file loading") {
  const std::string path = "conekit_test_scenario.json";
  {
    std::ofstream f(path);
    f << qubit_doc().dump();
  }
  CHECK(scenario_digest(resolve_scenario(path)) == scenario_digest(load_scenario(qubit_doc())));
  {
    std::ofstream f(path);
    f << "{ not json";
  }
  CHECK_THROWS_AS(resolve_scenario(path), ValidationError);
  std::remove(path.c_str());
}

TEST_CASE("every builtin loads and validates") {
  CHECK(builtin_names().size() == 8);
  for (std::string name : {"classical_simplex:1", "classical_simplex:4", "qubit_full:6:6", "qubit_six_state",
                           "qubit_trine", "qutrit_full", "gpt_square", "gpt_simplex:3",
                           "depolarized:qubit_trine:0.25"}) {
    CAPTURE(name);
    const auto sc = builtin_scenario(name);
    CHECK_NOTHROW(validate_scenario(sc));
    CHECK_FALSE(sc.states.empty());
  }
  CHECK(builtin_scenario("classical_simplex:3").states.size() == 3);
  CHECK(builtin_scenario("qubit_six_state").states.size() == 6);
  CHECK(builtin_scenario("gpt_square").states.size() == 4);
  CHECK(builtin_scenario("qubit_full:5:7").effects.size() >= 7);
}

TEST_CASE("coarse-graining adds a sum and its completion without changing R") {
  const auto sc = builtin_scenario("classical_simplex:3");
  const auto cg = coarse_grain_augment(sc, {0, 1});
  CHECK(cg.effects.size() == sc.effects.size() + 1);
  validate_scenario(cg);
  const auto r = scenario_reduced_space<Rational>(sc, false);
  const auto rc = scenario_reduced_space<Rational>(cg, false);
  CHECK(r.dim == rc.dim);
  CHECK(r.subspace.basis == rc.subspace.basis);
  CHECK_THROWS_AS(coarse_grain_augment(sc, {0, 7}), ValidationError);
}

TEST_CASE("ancilla embedding preserves the probability table") {
  const auto sc = builtin_scenario("qubit_six_state");
  for (int k : {2, 3}) {
    const auto emb = ancilla_embed(sc, k);
    CHECK(emb.hilbert_dim == 2 * k);
    validate_scenario(emb);
    const auto t0 = probability_table(sc), t1 = probability_table(emb);
    for (std::size_t a = 0; a < sc.states.size(); ++a)
      for (std::size_t b = 0; b < sc.effects.size(); ++b) CHECK(std::abs(t0[a][b] - t1[a][b]) < 1e-12);
  }
}

TEST_CASE("depolarizing mixes states toward the maximally mixed state") {
  const auto sc = builtin_scenario("qubit_six_state");
  const auto half = depolarized(sc, Rational(1, 2));
  CHECK(half.exact_available());
  const auto t = probability_table(half);
  CHECK(t[0][0] == doctest::Approx(0.75));
  CHECK(t[1][0] == doctest::Approx(0.25));
  const auto zero = probability_table(depolarized(sc, Rational(0)));
  for (const auto& row : zero) CHECK(row[0] == doctest::Approx(0.5));
  CHECK(scenario_digest(builtin_scenario("depolarized:qubit_six_state:1/2")) == scenario_digest(half));
}

TEST_CASE("Bloch directions are unit vectors with stable prefixes") {
  const auto a = bloch_directions(40, 3), b = bloch_directions(15, 3);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(a[i] == b[i]);
  for (const auto& n : a) CHECK(n[0] * n[0] + n[1] * n[1] + n[2] * n[2] == doctest::Approx(1.0));
  CHECK(a[0] == std::array<double, 3>{1, 0, 0});
}
