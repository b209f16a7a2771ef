#include <doctest.h>

#include <complex>
#include <unsupported/Eigen/KroneckerProduct>

#include "conekit/approximation.hpp"
#include "test_support.hpp"

using namespace conekit;
using testsupport::Gen;

namespace {

ComplexMatrix qubit_from_coords(const Vec<double>& v) {
  OperatorVector ov;
  ov.space_dim = 4;
  ov.coords = v;
  return from_coords(ov, hermitian_basis(2));
}

Eigen::VectorXcd random_pure(Gen& g, int d) {
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = {g.gaussian(), g.gaussian()};
  return v / v.norm();
}

}  // namespace

TEST_CASE("Bloch samplers produce states and valid faces") {
  for (double eta : {1.0, 0.5}) {
    const auto s = bloch_ball_sampler(eta);
    const auto rays = s->rays(40, 1);
    const auto faces = s->faces(40, 1);
    CHECK(rays.size() == 40);
    for (const auto& r : rays) {
      const ComplexMatrix m = qubit_from_coords(r);
      CHECK(std::abs(m.trace().real() - 1) < 1e-12);
      CHECK(min_eigenvalue(m) > -1e-12);
    }
    // every face is nonnegative on a dense set of cone elements
    for (const auto& f : faces)
      for (const auto& r : s->rays(200, 9)) CHECK(dot(f, r) > -1e-12);
  }
}

TEST_CASE("sampler streams are prefix stable") {
  const auto s = psd_cone_sampler(3);
  const auto a = s->rays(30, 4), b = s->rays(12, 4);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(a[i] == b[i]);
  const auto fa = bloch_ball_sampler(1)->faces(30, 4), fb = bloch_ball_sampler(1)->faces(7, 4);
  for (std::size_t i = 0; i < fb.size(); ++i) CHECK(fa[i] == fb[i]);
}

TEST_CASE("PSD sampler rays are rank-one projectors") {
  const auto s = psd_cone_sampler(3);
  const auto hb = hermitian_basis(3);
  for (const auto& r : s->rays(20, 2)) {
    OperatorVector ov;
    ov.space_dim = 9;
    ov.coords = r;
    const ComplexMatrix m = from_coords(ov, hb);
    CHECK((m * m - m).norm() < 1e-10);
    CHECK(std::abs(m.trace().real() - 1) < 1e-10);
  }
}

TEST_CASE("inner approximation sits inside the outer approximation") {
  const auto as = resolve_approx_scenario("builtin:qubit_full");
  const auto r = approx_reduced_space(as);
  CHECK(r.dim == 4);
  for (std::size_t k : {6u, 14u, 22u}) {
    const auto in = inner_cone_approx(*as.states, r, k, 0);
    const auto out = outer_cone_approx(*as.states, r, k, 0);
    CHECK(is_pointed(in).pointed());
    CHECK(is_spanning(in));
    for (const auto& x : in.rays) CHECK(membership(x, out, 1e-9).inside);
  }
}

TEST_CASE("inner approximation extends a non-spanning sample") {
  const auto as = resolve_approx_scenario("builtin:qubit_full");
  const auto r = approx_reduced_space(as);
  // four octahedron vertices do not span the Bloch ball cone
  const auto in = inner_cone_approx(*as.states, r, 4, 0);
  CHECK(is_spanning(in));
  CHECK(in.rays.size() > 4);
}

TEST_CASE("maximally depolarized qubit is certified at the first level") {
  const auto as = resolve_approx_scenario("builtin:depolarized:qubit_full:0");
  const auto v = hierarchy(as, 3, ApproxSchedule{});
  CHECK(v.kind == ApproxKind::CertifiedClassical);
  CHECK(v.level == 1);
  REQUIRE(v.certificate);
}

TEST_CASE("full qubit theory is never certified") {
  const auto as = resolve_approx_scenario("builtin:qubit_full");
  const auto v = hierarchy(as, 3, ApproxSchedule{}, {}, ApproxMode::Certify);
  CHECK(v.kind == ApproxKind::Inconclusive);
  const auto w = hierarchy(as, 3, ApproxSchedule{}, {}, ApproxMode::Witness);
  CHECK(w.kind == ApproxKind::WitnessedNonClassical);
  CHECK(w.violation < 0);
  CHECK(w.replay_min >= -1e-8);
}

TEST_CASE("classical simplex never yields a witness") {
  const auto as = resolve_approx_scenario("builtin:classical_simplex:3");
  const auto v = hierarchy(as, 3, ApproxSchedule{}, {}, ApproxMode::Witness);
  CHECK(v.kind != ApproxKind::WitnessedNonClassical);
  const auto c = hierarchy(as, 3, ApproxSchedule{});
  CHECK(c.kind == ApproxKind::CertifiedClassical);
}

TEST_CASE("margins are monotone across levels") {
  const auto as = resolve_approx_scenario("builtin:depolarized:qubit_full:0.5");
  ApproxSchedule sch;
  double prev_outer = 1e300, prev_inner = -1e300;
  for (int l = 1; l <= 4; ++l) {
    const auto v = hierarchy(as, l, sch, {}, ApproxMode::Certify);
    const auto& rec = v.levels.back();
    if (rec.inner_margin) {
      CHECK(*rec.inner_margin >= prev_inner - 1e-9);
      prev_inner = *rec.inner_margin;
    }
    const auto w = hierarchy(as, l, sch, {}, ApproxMode::Witness);
    const auto& wr = w.levels.back();
    if (wr.outer_margin) {
      CHECK(*wr.outer_margin <= prev_outer + 1e-9);
      prev_outer = *wr.outer_margin;
    }
  }
}

TEST_CASE("polyhedral scenarios match the exact classifier at level one") {
  for (std::string name : {"classical_simplex:2", "qubit_six_state", "gpt_square"}) {
    CAPTURE(name);
    const auto as = resolve_approx_scenario("builtin:" + name);
    const auto v = hierarchy(as, 1, ApproxSchedule{});
    const auto exact = classify_kind(builtin_scenario(name));
    if (exact == VerdictKind::Classical) CHECK(v.kind == ApproxKind::CertifiedClassical);
    if (exact == VerdictKind::NonClassical) CHECK(v.kind == ApproxKind::WitnessedNonClassical);
  }
}

TEST_CASE("Bell state is witnessed and the witness is sound on product states") {
  const auto v = entanglement_check(bell_state(), 2, 3, ApproxSchedule{});
  REQUIRE(v.kind == ApproxKind::WitnessedNonClassical);
  CHECK(v.level <= 3);
  const auto bell = bipartite_coords(bell_state(), 2);
  CHECK(dot(bell, v.witness) < 0);
  CHECK(std::abs(norm2(v.witness) - 1) < 1e-9);
  Gen g(77);
  double worst = 1;
  for (int k = 0; k < 2000; ++k) {
    const Eigen::VectorXcd a = random_pure(g, 2), b = random_pure(g, 2);
    const ComplexMatrix prod = Eigen::kroneckerProduct(a * a.adjoint(), b * b.adjoint());
    worst = std::min(worst, dot(bipartite_coords(prod, 2), v.witness));
  }
  CHECK(worst >= -1e-8);
}

TEST_CASE("separable states are never witnessed") {
  const ComplexMatrix mixed = ComplexMatrix::Identity(4, 4) / 4.0;
  CHECK(entanglement_check(mixed, 2, 3, ApproxSchedule{}).kind == ApproxKind::CertifiedClassical);
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
  zero(0) = 1;
  const ComplexMatrix p = zero * zero.adjoint();
  const ComplexMatrix prod = Eigen::kroneckerProduct(p, p);
  CHECK(entanglement_check(prod, 2, 3, ApproxSchedule{}).kind != ApproxKind::WitnessedNonClassical);
}

TEST_CASE("approximation honours the tensor size guard") {
  ClassifyOptions o;
  o.max_tensor_dim = 9;
  const auto as = resolve_approx_scenario("builtin:qubit_full");
  CHECK_THROWS_AS(hierarchy(as, 1, ApproxSchedule{}, o), ResourceError);
}
