#pragma once

#include <Eigen/Dense>
#include <string>

#include "conekit/numeric.hpp"

namespace conekit {

using ComplexMatrix = Eigen::MatrixXcd;

/// Hermitian matrix with exact rational entries, row-major real/imag parts.
struct ExactMatrix {
  int dim = 0;
  std::vector<Rational> re;
  std::vector<Rational> im;
};

/// Generalized Gell-Mann basis scaled to Hilbert-Schmidt orthonormality.
/// Order: identity, symmetric (j<k), antisymmetric (j<k), diagonal.
struct HermBasis {
  int hilbert_dim = 0;
  std::vector<ComplexMatrix> basis;
};

/// Real coordinates of a Hermitian operator (or GPT vector) in an
/// orthonormal basis, so the inner product is the plain dot product.
struct OperatorVector {
  int space_dim = 0;
  Vec<double> coords;
  std::string label;
};

struct ValidationReport {
  bool ok = true;
  double min_eigenvalue = 0;
  double trace_deviation = 0;
  std::string side;  // "E" or "I-E" for effects
  std::string message;
};

HermBasis hermitian_basis(int d);

double hs_inner(const OperatorVector& a, const OperatorVector& b);

bool is_hermitian(const ComplexMatrix& m, double herm_tol);

OperatorVector to_coords(const ComplexMatrix& m, const HermBasis& basis, double herm_tol = 1e-10);

ComplexMatrix from_coords(const OperatorVector& v, const HermBasis& basis);

/** Traces Tr[B_k m] against the unnormalized Gell-Mann matrices B_k (entries
 * 0, +-1, +-i, -l). Works for any scalar type, which is how exact
 * coordinates stay rational. */
template <class S>
Vec<S> gell_mann_traces(int d, const std::vector<S>& re, const std::vector<S>& im) {
  Vec<S> t;
  t.reserve(static_cast<std::size_t>(d) * d);
  auto at = [d](const std::vector<S>& v, int j, int k) -> const S& { return v[j * d + k]; };
  S tr = 0;
  for (int j = 0; j < d; ++j) tr += at(re, j, j);
  t.push_back(tr);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) t.push_back(at(re, j, k) + at(re, k, j));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) t.push_back(at(im, k, j) - at(im, j, k));
  for (int l = 1; l < d; ++l) {
    S acc = 0;
    for (int j = 0; j < l; ++j) acc += at(re, j, j);
    acc -= S(l) * at(re, l, l);
    t.push_back(acc);
  }
  return t;
}

/// Squared norms Tr[B_k^2] of the unnormalized Gell-Mann matrices.
Vec<Rational> gell_mann_metric(int d);

/// Contravariant coordinates m = sum_k c_k B_k in the unnormalized basis; the
/// inner product is then the metric-weighted dot product with gell_mann_metric.
Vec<Rational> exact_coords(const ExactMatrix& m);

ComplexMatrix to_complex(const ExactMatrix& m);

ValidationReport validate_state(const ComplexMatrix& m, const Tolerances& tol = {});

ValidationReport validate_effect(const ComplexMatrix& m, const Tolerances& tol = {});

/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const ComplexMatrix& m);

}  // namespace conekit
