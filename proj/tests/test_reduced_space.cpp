#include <doctest.h>

#include "conekit/reduced_space.hpp"
#include "conekit/unit_separability.hpp"
#include "test_support.hpp"

using namespace conekit;
using testsupport::Gen;

namespace {

double raw_pairing(const Scenario& sc, const Element& s, const Element& e) {
  if (sc.mode == ScenarioMode::Gpt) return dot(s.re, e.re);
  return testsupport::born(element_matrix(sc, s), element_matrix(sc, e));
}

template <class S>
double max_invariance_error(const Scenario& sc) {
  const auto r = scenario_reduced_space<S>(sc, false);
  REQUIRE(r.states.size() == sc.states.size());
  REQUIRE(r.effects.size() == sc.effects.size());
  double worst = 0;
  for (std::size_t k = 0; k < sc.states.size(); ++k) {
    for (std::size_t l = 0; l < sc.effects.size(); ++l) {
      const double reduced = Arith<S>::to_double(reduced_inner(r, r.states[k], r.effects[l]));
      worst = std::max(worst, std::abs(raw_pairing(sc, sc.states[k], sc.effects[l]) - reduced));
    }
  }
  return worst;
}

template <class S>
void check_orthogonal(const ReducedSpace<S>& r) {
  const auto& b = r.subspace.basis;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double v = Arith<S>::to_double(dot(b[i], b[j], r.metric));
      const double want = i == j ? Arith<S>::to_double(r.gram()[i]) : 0.0;
      CHECK(std::abs(v - want) < 1e-10);
    }
}

}  // namespace

TEST_CASE("property: pairings survive the projection onto R") {
  Gen g(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = g.integer(2, 3);
    const auto doc = testsupport::random_quantum_doc(g, d, g.integer(1, 5), g.integer(1, 3), g.coin());
    const auto sc = load_scenario(doc);
    CHECK(max_invariance_error<double>(sc) <= 1e-9);
    const auto r = scenario_reduced_space<double>(sc, false);
    check_orthogonal(r);
    CHECK(r.dim <= sc.ambient_dim());
  }
}

TEST_CASE("exact reduced space on the builtin corpus") {
  for (std::string name : {"classical_simplex:2", "classical_simplex:4", "qubit_six_state", "gpt_square",
                           "gpt_simplex:3", "depolarized:qubit_six_state:1/2"}) {
    CAPTURE(name);
    const auto sc = builtin_scenario(name);
    CHECK(max_invariance_error<Rational>(sc) == 0.0);
    const auto r = scenario_reduced_space<Rational>(sc, false);
    check_orthogonal(r);
    for (const auto& v : r.subspace.basis) CHECK(primitive_integer(v) == v);
  }
}

TEST_CASE("known reduced dimensions") {
  CHECK(scenario_reduced_space<Rational>(builtin_scenario("classical_simplex:3"), false).dim == 3);
  CHECK(scenario_reduced_space<Rational>(builtin_scenario("qubit_six_state"), false).dim == 4);
  CHECK(scenario_reduced_space<Rational>(builtin_scenario("gpt_square"), false).dim == 3);
  CHECK(scenario_reduced_space<Rational>(builtin_scenario("depolarized:qubit_six_state:0"), false).dim == 1);
  CHECK(scenario_reduced_space<double>(builtin_scenario("qubit_trine"), false).dim == 3);
}

TEST_CASE("swapped reduced space has the same dimension and pairings") {
  Gen g(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sc = load_scenario(testsupport::random_quantum_doc(g, 3, g.integer(1, 4), g.integer(1, 3), true));
    const auto r = scenario_reduced_space<double>(sc, false);
    const auto rs = scenario_reduced_space<double>(sc, true);
    CHECK(r.dim == rs.dim);
    CHECK(rs.swapped);
    for (std::size_t k = 0; k < sc.states.size(); ++k)
      for (std::size_t l = 0; l < sc.effects.size(); ++l)
        CHECK(std::abs(reduced_inner(r, r.states[k], r.effects[l]) - reduced_inner(rs, rs.states[k], rs.effects[l])) <
              1e-9);
  }
}

TEST_CASE("projection is idempotent and orthogonal") {
  const Vec<Rational> metric{1, 2, 3};
  const auto s = span_orthobasis<Rational>({{1, 1, 0}}, metric);
  REQUIRE(s.rank() == 1);
  const Vec<Rational> v{3, -1, 5};
  const auto p = project(v, s, metric);
  CHECK(project(p, s, metric) == p);
  Vec<Rational> resid = v;
  axpy(Rational(-1), p, resid);
  CHECK(dot(resid, s.basis[0], metric) == 0);
  CHECK(embed(subspace_coords(v, s, metric), s) == p);
}
