#include "conekit/operator_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace conekit {

HermBasis hermitian_basis(int d) {
  if (d < 1) throw std::invalid_argument("hermitian_basis: dimension must be positive");
  using C = std::complex<double>;
  HermBasis hb;
  hb.hilbert_dim = d;
  hb.basis.push_back(ComplexMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix b = ComplexMatrix::Zero(d, d);
      b(j, k) = r2;
      b(k, j) = r2;
      hb.basis.push_back(b);
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix b = ComplexMatrix::Zero(d, d);
      b(j, k) = C(0, -r2);
      b(k, j) = C(0, r2);
      hb.basis.push_back(b);
    }
  for (int l = 1; l < d; ++l) {
    ComplexMatrix b = ComplexMatrix::Zero(d, d);
    const double s = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) b(j, j) = s;
    b(l, l) = -l * s;
    hb.basis.push_back(b);
  }
  return hb;
}

double hs_inner(const OperatorVector& a, const OperatorVector& b) {
  if (a.space_dim != b.space_dim) throw std::invalid_argument("hs_inner: dimension mismatch");
  return dot(a.coords, b.coords);
}

bool is_hermitian(const ComplexMatrix& m, double herm_tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= herm_tol;
}

OperatorVector to_coords(const ComplexMatrix& m, const HermBasis& basis, double herm_tol) {
  if (m.rows() != basis.hilbert_dim || m.cols() != basis.hilbert_dim)
    throw std::invalid_argument("to_coords: dimension mismatch");
  if (!is_hermitian(m, herm_tol)) throw ValidationError("to_coords: matrix is not Hermitian");
  OperatorVector v;
  v.space_dim = static_cast<int>(basis.basis.size());
  v.coords.reserve(basis.basis.size());
  for (const auto& b : basis.basis) v.coords.push_back((b * m).trace().real());
  return v;
}

ComplexMatrix from_coords(const OperatorVector& v, const HermBasis& basis) {
  if (v.space_dim != static_cast<int>(basis.basis.size()))
    throw std::invalid_argument("from_coords: dimension mismatch");
  const int d = basis.hilbert_dim;
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < basis.basis.size(); ++i) m += v.coords[i] * basis.basis[i];
  return m;
}

Vec<Rational> gell_mann_metric(int d) {
  Vec<Rational> g;
  g.push_back(Rational(d));
  const int pairs = d * (d - 1) / 2;
  for (int i = 0; i < 2 * pairs; ++i) g.push_back(Rational(2));
  for (int l = 1; l < d; ++l) g.push_back(Rational(l + l * l));
  return g;
}

Vec<Rational> exact_coords(const ExactMatrix& m) {
  auto t = gell_mann_traces<Rational>(m.dim, m.re, m.im);
  const auto g = gell_mann_metric(m.dim);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] /= g[k];
  return t;
}

ComplexMatrix to_complex(const ExactMatrix& m) {
  ComplexMatrix out(m.dim, m.dim);
  for (int j = 0; j < m.dim; ++j)
    for (int k = 0; k < m.dim; ++k)
      out(j, k) = std::complex<double>(m.re[j * m.dim + k].convert_to<double>(),
                                       m.im[j * m.dim + k].convert_to<double>());
  return out;
}

double min_eigenvalue(const ComplexMatrix& m) {
  const ComplexMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ValidationReport validate_state(const ComplexMatrix& m, const Tolerances& tol) {
  ValidationReport rep;
  if (!is_hermitian(m, tol.herm_tol)) {
    rep.ok = false;
    rep.message = "matrix is not Hermitian";
    return rep;
  }
  rep.min_eigenvalue = min_eigenvalue(m);
  rep.trace_deviation = std::abs(m.trace().real() - 1.0);
  if (rep.min_eigenvalue < -tol.psd_tol) {
    rep.ok = false;
    rep.message = "negative eigenvalue " + std::to_string(rep.min_eigenvalue);
  }
  if (rep.trace_deviation > tol.trace_tol) {
    rep.ok = false;
    if (!rep.message.empty()) rep.message += "; ";
    rep.message += "trace " + std::to_string(m.trace().real()) + " differs from 1";
  }
  return rep;
}

ValidationReport validate_effect(const ComplexMatrix& m, const Tolerances& tol) {
  ValidationReport rep;
  if (!is_hermitian(m, tol.herm_tol)) {
    rep.ok = false;
    rep.message = "matrix is not Hermitian";
    return rep;
  }
  const double lo = min_eigenvalue(m);
  const ComplexMatrix comp = ComplexMatrix::Identity(m.rows(), m.cols()) - m;
  const double hi = min_eigenvalue(comp);
  rep.min_eigenvalue = std::min(lo, hi);
  if (lo < -tol.psd_tol) {
    rep.ok = false;
    rep.side = "E";
    rep.min_eigenvalue = lo;
    rep.message = "E has negative eigenvalue " + std::to_string(lo);
  } else if (hi < -tol.psd_tol) {
    rep.ok = false;
    rep.side = "I-E";
    rep.min_eigenvalue = hi;
    rep.message = "I-E has negative eigenvalue " + std::to_string(hi);
  }
  return rep;
}

}  // namespace conekit
