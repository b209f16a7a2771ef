#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace conekit {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

template <class S>
using Vec = std::vector<S>;

template <class S>
using Mat = std::vector<Vec<S>>;  // row-major, rows may be ragged only transiently

/** Numeric tolerances shared by every module. Exact arithmetic ignores all of
 * them except where a value has to be compared in floating point anyway
 * (validation of raw scenario data, witness values reported as doubles). */
struct Tolerances {
  double herm_tol = 1e-10;
  double psd_tol = 1e-9;
  double trace_tol = 1e-9;
  double ortho_tol = 1e-12;
  double rank_tol = 1e-9;  // relative to the largest singular value
  double polar_tol = 1e-9;
  double povm_tol = 1e-9;
  double verdict_tol = 1e-8;
  double margin_tol = 1e-6;
  double recon_tol = 1e-9;
  double lp_tol = 1e-10;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that does not describe a valid scenario (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A cone handed to an operation violates that operation's preconditions.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A size guard or combinatorial budget was exceeded (CLI exit code 4).
class ResourceError : public Error {
 public:
  using Error::Error;
};

template <class S>
struct Arith;

template <>
struct Arith<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static int sign(double x, double tol) { return x > tol ? 1 : (x < -tol ? -1 : 0); }
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double abs(double x) { return std::abs(x); }
};

template <>
struct Arith<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static Rational from_double(double x) { return Rational(x); }
  static int sign(const Rational& x, double) { return x.sign(); }
  static bool is_zero(const Rational& x, double) { return x.is_zero(); }
  static Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }
};

template <class S>
S dot(const Vec<S>& a, const Vec<S>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  S acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Inner product with a diagonal metric: sum_i g_i a_i b_i.
template <class S>
S dot(const Vec<S>& a, const Vec<S>& b, const Vec<S>& metric) {
  if (a.size() != b.size() || a.size() != metric.size())
    throw std::invalid_argument("dot: dimension mismatch");
  S acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += metric[i] * a[i] * b[i];
  return acc;
}

template <class S>
Vec<S> hadamard(const Vec<S>& a, const Vec<S>& b) {
  Vec<S> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

template <class S>
Vec<S> scaled(const Vec<S>& a, const S& s) {
  Vec<S> out(a);
  for (auto& x : out) x *= s;
  return out;
}

template <class S>
void axpy(const S& alpha, const Vec<S>& x, Vec<S>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

template <class S>
bool is_zero_vec(const Vec<S>& v, double tol) {
  for (const auto& x : v)
    if (!Arith<S>::is_zero(x, tol)) return false;
  return true;
}

template <class S>
Vec<double> to_double(const Vec<S>& v) {
  Vec<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Arith<S>::to_double(v[i]);
  return out;
}

inline double norm2(const Vec<double>& v) { return std::sqrt(dot(v, v)); }

/// Flattened outer product a (x) b, row-major.
template <class S>
Vec<S> kron(const Vec<S>& a, const Vec<S>& b) {
  Vec<S> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

/// Scales a rational vector to the unique primitive integer vector with the
/// same direction (positive multiple). Zero vectors are returned unchanged.
Vec<Rational> primitive_integer(const Vec<Rational>& v);

/// Parses "p/q", "p" or a decimal literal into an exact rational.
Rational parse_rational(const std::string& text);

/// Shortest round-trip decimal of a double, parsed exactly.
Rational rational_from_double(double x);

std::string to_string(const Rational& q);

}  // namespace conekit
