#include <doctest.h>

#include "conekit/linalg.hpp"
#include "conekit/lp.hpp"
#include "test_support.hpp"

using namespace conekit;

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("-1.5e-2") == Rational(-3, 200));
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("abc"), ValidationError);
}

TEST_CASE("rational_from_double uses the shortest decimal") {
  CHECK(rational_from_double(0.1) == Rational(1, 10));
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(to_string(Rational(-6, 4)) == "-3/2");
  CHECK(to_string(Rational(5)) == "5");
}

TEST_CASE("primitive_integer keeps direction and removes common factors") {
  const Vec<Rational> v{Rational(1, 2), Rational(-3, 4), Rational(0)};
  CHECK(primitive_integer(v) == Vec<Rational>{2, -3, 0});
  CHECK(primitive_integer(Vec<Rational>{0, 0}) == Vec<Rational>{0, 0});
  CHECK(primitive_integer(Vec<Rational>{-4, -6}) == Vec<Rational>{-2, -3});
}

TEST_CASE("kron and metric dot") {
  const Vec<int> a{1, 2}, b{3, 4};
  CHECK(kron(a, b) == Vec<int>{3, 4, 6, 8});
  CHECK(dot(Vec<double>{1, 2}, Vec<double>{3, 4}, Vec<double>{2, 3}) == doctest::Approx(30));
  CHECK_THROWS(dot(Vec<double>{1}, Vec<double>{1, 2}));
}

TEST_CASE("rank, kernel and inverse agree in both arithmetics") {
  const Mat<Rational> a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  CHECK(rank(a, 3) == 2);
  const auto k = kernel_vector(a, 3);
  REQUIRE(k);
  for (const auto& row : a) CHECK(dot(row, *k) == 0);
  const Mat<Rational> b{{2, 1}, {1, 1}};
  const auto inv = inverse(b);
  REQUIRE(inv);
  CHECK((*inv)[0][0] == 1);
  CHECK((*inv)[0][1] == -1);
  CHECK((*inv)[1][1] == 2);
  CHECK_FALSE(inverse(Mat<double>{{1, 2}, {2, 4}}));
}

TEST_CASE("property: solve reproduces the right-hand side") {
  testsupport::Gen g(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 6);
    Mat<Rational> a(n, Vec<Rational>(n));
    Vec<Rational> b(n);
    for (int i = 0; i < n; ++i) {
      b[i] = g.integer(-5, 5);
      for (int j = 0; j < n; ++j) a[i][j] = g.integer(-4, 4);
    }
    const auto x = solve(a, b);
    if (rank(a, n) < n) {
      CHECK_FALSE(x);
      continue;
    }
    REQUIRE(x);
    for (int i = 0; i < n; ++i) CHECK(dot(a[i], *x) == b[i]);
  }
}

TEST_CASE("simplex finds a known optimum") {
  // min -x1 - x2  s.t. x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6
  const Mat<Rational> a{{1, 2, 1, 0}, {3, 1, 0, 1}};
  const auto r = solve_lp<Rational>(a, {4, 6}, {-1, -1, 0, 0});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == Rational(-14, 5));
  CHECK(r.x[0] == Rational(8, 5));
  CHECK(r.x[1] == Rational(6, 5));
  // duality: b.y equals the optimum
  CHECK(4 * r.y[0] + 6 * r.y[1] == r.objective);
}

TEST_CASE("simplex reports infeasibility with a Farkas certificate") {
  // x1 + x2 = -1 with x >= 0 is infeasible
  const Mat<Rational> a{{1, 1}};
  const auto r = solve_lp<Rational>(a, {-1}, {0, 0});
  REQUIRE(r.status == LpStatus::Infeasible);
  CHECK(r.y[0] * -1 > 0);
  CHECK(r.y[0] * 1 <= 0);
}

TEST_CASE("simplex detects unboundedness") {
  const Mat<double> a{{1, -1}};
  const auto r = solve_lp<double>(a, {0}, {-1, 0});
  CHECK(r.status == LpStatus::Unbounded);
}

TEST_CASE("property: LP certificates are valid in exact arithmetic") {
  testsupport::Gen g(5);
  for (int trial = 0; trial < 150; ++trial) {
    const int m = g.integer(1, 4), n = g.integer(1, 6);
    Mat<Rational> a(m, Vec<Rational>(n));
    Vec<Rational> b(m), c(n);
    for (int i = 0; i < m; ++i) {
      b[i] = g.integer(-3, 3);
      for (int j = 0; j < n; ++j) a[i][j] = g.integer(-3, 3);
    }
    for (int j = 0; j < n; ++j) c[j] = g.integer(0, 4);  // c >= 0 keeps the LP bounded
    const auto r = solve_lp(a, b, c);
    REQUIRE(r.status != LpStatus::IterationLimit);
    REQUIRE(r.status != LpStatus::Unbounded);
    if (r.status == LpStatus::Optimal) {
      for (int i = 0; i < m; ++i) CHECK(dot(a[i], r.x) == b[i]);
      for (const auto& x : r.x) CHECK(x >= 0);
      for (int j = 0; j < n; ++j) {
        Rational col = 0;
        for (int i = 0; i < m; ++i) col += a[i][j] * r.y[i];
        CHECK(col <= c[j]);
      }
      CHECK(dot(b, r.y) == r.objective);
    } else {
      for (int j = 0; j < n; ++j) {
        Rational col = 0;
        for (int i = 0; i < m; ++i) col += a[i][j] * r.y[i];
        CHECK(col <= 0);
      }
      CHECK(dot(b, r.y) > 0);
    }
  }
}
