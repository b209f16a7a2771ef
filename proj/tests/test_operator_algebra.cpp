#include <doctest.h>

#include "conekit/operator_algebra.hpp"
#include "test_support.hpp"

using namespace conekit;
using testsupport::Gen;

namespace {

ComplexMatrix random_hermitian(Gen& g, int d) {
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = {g.gaussian(), g.gaussian()};
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("hermitian basis is Hilbert-Schmidt orthonormal") {
  for (int d = 1; d <= 4; ++d) {
    const auto hb = hermitian_basis(d);
    REQUIRE(static_cast<int>(hb.basis.size()) == d * d);
    for (int i = 0; i < d * d; ++i) {
      CHECK(is_hermitian(hb.basis[i], 1e-14));
      for (int j = 0; j < d * d; ++j) {
        const double t = (hb.basis[i] * hb.basis[j]).trace().real();
        CHECK(t == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("property: coordinates round-trip and preserve the trace inner product") {
  Gen g(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = g.integer(1, 4);
    const auto hb = hermitian_basis(d);
    const ComplexMatrix a = random_hermitian(g, d), b = random_hermitian(g, d);
    const auto va = to_coords(a, hb), vb = to_coords(b, hb);
    CHECK((from_coords(va, hb) - a).norm() < 1e-12);
    CHECK(hs_inner(va, vb) == doctest::Approx(testsupport::born(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("to_coords rejects non-Hermitian input") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1;
  CHECK_THROWS_AS(to_coords(m, hermitian_basis(2)), ValidationError);
}

TEST_CASE("property: exact coordinates reproduce the trace inner product") {
  Gen g(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = g.integer(2, 3);
    auto random_exact = [&] {
      ExactMatrix m;
      m.dim = d;
      m.re.assign(d * d, 0);
      m.im.assign(d * d, 0);
      for (int i = 0; i < d; ++i) {
        m.re[i * d + i] = Rational(g.integer(-4, 4), g.integer(1, 3));
        for (int j = i + 1; j < d; ++j) {
          const Rational re(g.integer(-4, 4), g.integer(1, 3)), im(g.integer(-4, 4), g.integer(1, 3));
          m.re[i * d + j] = re;
          m.re[j * d + i] = re;
          m.im[i * d + j] = im;
          m.im[j * d + i] = -im;
        }
      }
      return m;
    };
    const ExactMatrix a = random_exact(), b = random_exact();
    const auto ca = exact_coords(a), cb = exact_coords(b);
    const Rational via_coords = dot(ca, cb, gell_mann_metric(d));
    // Tr[AB] summed entrywise in exact arithmetic
    Rational direct = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        direct += a.re[i * d + j] * b.re[j * d + i] - a.im[i * d + j] * b.im[j * d + i];
    CHECK(via_coords == direct);
    CHECK(std::abs(direct.convert_to<double>() - testsupport::born(to_complex(a), to_complex(b))) < 1e-12);
  }
}

TEST_CASE("state validation") {
  ComplexMatrix rho = ComplexMatrix::Identity(2, 2) / 2.0;
  CHECK(validate_state(rho).ok);
  const auto twice = validate_state(rho * 2.0);
  CHECK_FALSE(twice.ok);
  CHECK(twice.trace_deviation == doctest::Approx(1.0));
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  const auto r = validate_state(neg);
  CHECK_FALSE(r.ok);
  CHECK(r.min_eigenvalue == doctest::Approx(-0.5));
}

TEST_CASE("effect validation reports the failing side") {
  ComplexMatrix e = ComplexMatrix::Zero(2, 2);
  e(0, 0) = 1.25;
  const auto hi = validate_effect(e);
  CHECK_FALSE(hi.ok);
  CHECK(hi.side == "I-E");
  e(0, 0) = -0.25;
  const auto lo = validate_effect(e);
  CHECK_FALSE(lo.ok);
  CHECK(lo.side == "E");
  e(0, 0) = 0.5;
  CHECK(validate_effect(e).ok);
}
