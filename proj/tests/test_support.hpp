#pragma once

// Hand-rolled generators shared by the unit tests and the acceptance binary.

#include <nlohmann/json.hpp>
#include <random>

#include "conekit/cone.hpp"
#include "conekit/linalg.hpp"
#include "conekit/scenario.hpp"

namespace testsupport {

using conekit::ComplexMatrix;
using conekit::Mat;
using conekit::Rational;
using conekit::Vec;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 eng_;
};

/// Integer rays with a positive first coordinate (so e_1 is a positive
/// functional) whose span is the full space.
inline conekit::ConeV<Rational> random_cone(Gen& g, int dim, int nrays) {
  for (;;) {
    Mat<Rational> rays;
    for (int k = 0; k < nrays; ++k) {
      Vec<Rational> v(dim);
      v[0] = g.integer(1, 4);
      for (int i = 1; i < dim; ++i) v[i] = g.integer(-3, 3);
      rays.push_back(v);
    }
    if (conekit::rank(rays, dim, 0.0) == dim) return conekit::make_cone<Rational>(dim, rays);
  }
}

inline ComplexMatrix random_psd(Gen& g, int d, int rank) {
  ComplexMatrix a(d, rank);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = {g.gaussian(), g.gaussian()};
  ComplexMatrix b = a * a.adjoint();
  return (b + b.adjoint()) / 2.0;
}

inline nlohmann::json matrix_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

/** Random float quantum scenario: mixed states of random rank and two-outcome
 * POVMs {E, I - E}. With `commuting` all effects are diagonal, which keeps
 * dim R below the ambient dimension; `sharp` makes states pure and POVMs
 * projective. */
inline nlohmann::json random_quantum_doc(Gen& g, int d, int n_states, int n_povms, bool commuting,
                                         bool sharp = false) {
  nlohmann::json doc;
  doc["hilbert_dim"] = d;
  doc["states"] = nlohmann::json::array();
  for (int k = 0; k < n_states; ++k) {
    ComplexMatrix rho = random_psd(g, d, sharp ? 1 : g.integer(1, d));
    rho /= rho.trace().real();
    doc["states"].push_back(matrix_json(rho));
  }
  doc["povms"] = nlohmann::json::array();
  for (int k = 0; k < n_povms; ++k) {
    ComplexMatrix b = random_psd(g, d, sharp ? 1 : g.integer(1, d));
    if (commuting) b = ComplexMatrix(b.diagonal().asDiagonal());
    const double top = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(b).eigenvalues().maxCoeff();
    ComplexMatrix e = b * ((sharp ? 1.0 : 0.2 + 0.8 * g.uniform()) / top);
    ComplexMatrix f = ComplexMatrix::Identity(d, d) - e;
    doc["povms"].push_back({matrix_json(e), matrix_json((f + f.adjoint()) / 2.0)});
  }
  return doc;
}

/// <rho, E> = Re Tr[rho E] straight from the matrices.
inline double born(const ComplexMatrix& rho, const ComplexMatrix& e) { return (rho * e).trace().real(); }

/// Pointwise equality of two canonical ray lists as sets (both sorted).
template <class S>
bool same_rays(const Mat<S>& a, const Mat<S>& b) {
  auto ca = conekit::canonicalize(a), cb = conekit::canonicalize(b);
  return ca == cb;
}

}  // namespace testsupport
