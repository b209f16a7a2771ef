#pragma once

#include "conekit/numeric.hpp"

namespace conekit {

/** Orthogonal basis of a subspace of an ambient space whose inner product is
 * diagonal with weights `metric`. In floating point the basis is orthonormal
 * (gram == 1); in exact mode it is orthogonal with primitive integer vectors
 * and `gram` holds the squared norms, so no square roots are needed. */
template <class S>
struct Subspace {
  int ambient_dim = 0;
  Mat<S> basis;
  Vec<S> gram;
  int rank() const { return static_cast<int>(basis.size()); }
};

template <class S>
struct ReducedSpace {
  Subspace<S> subspace;
  int dim = 0;
  Vec<S> metric;  // ambient metric
  bool swapped = false;
  // Coordinates x_i with P_R v = sum_i x_i b_i. Inner products in R are
  // sum_i gram_i x_i y_i.
  Mat<S> states;
  Mat<S> effects;
  Vec<S> unit;
  const Vec<S>& gram() const { return subspace.gram; }
};

template <class S>
Subspace<S> span_orthobasis(const Mat<S>& vectors, const Vec<S>& metric, double rank_tol = 1e-9);

/// Orthogonal projection onto the subspace, in ambient coordinates.
template <class S>
Vec<S> project(const Vec<S>& v, const Subspace<S>& s, const Vec<S>& metric);

/// Coordinates of the projection with respect to the subspace basis.
template <class S>
Vec<S> subspace_coords(const Vec<S>& v, const Subspace<S>& s, const Vec<S>& metric);

/// Ambient vector sum_i x_i b_i.
template <class S>
Vec<S> embed(const Vec<S>& coords, const Subspace<S>& s);

/// R = P_span(e)(span(s)).
template <class S>
ReducedSpace<S> reduced_space(const Mat<S>& states, const Mat<S>& effects, const Vec<S>& unit,
                              const Vec<S>& metric, double rank_tol = 1e-9);

/// R' = P_span(s)(span(e)).
template <class S>
ReducedSpace<S> swapped_reduced_space(const Mat<S>& states, const Mat<S>& effects,
                                      const Vec<S>& unit, const Vec<S>& metric,
                                      double rank_tol = 1e-9);

/// Inner product in R of two coordinate vectors.
template <class S>
S reduced_inner(const ReducedSpace<S>& r, const Vec<S>& a, const Vec<S>& b) {
  return dot(a, b, r.gram());
}

}  // namespace conekit
