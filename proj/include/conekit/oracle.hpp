#pragma once

#include <string>

#include "conekit/cone.hpp"
#include "conekit/scenario.hpp"
#include "conekit/unit_separability.hpp"

namespace conekit::oracle {

/// Budgets for the brute-force routines.
inline constexpr int kMaxAmbient = 6;
inline constexpr std::size_t kMaxRays = 24;
inline constexpr int kMaxReducedDim = 4;

template <class S>
struct OracleReport {
  bool member = false;
  Vec<S> coefficients;  // nonnegative, recombine to the point
  Vec<S> normal;        // <normal, g> >= 0 on generators, <normal, point> < 0
  double margin = 0;    // <normal, point> for the unit normal
};

/** Polar rays (plain dot product) by trying every (d-1)-subset of generators:
 * its cofactor null vector is kept when some orientation is nonnegative on
 * all generators. Output is canonical (primitive integer or unit) and sorted. */
template <class S>
Mat<S> brute_force_polar_rays(const ConeV<S>& c);

/// Nonnegative-combination feasibility by a standalone phase-1 simplex
/// (Bland's rule). Throws Error when a float certificate does not verify.
template <class S>
OracleReport<S> lp_membership(const Vec<S>& point, const Mat<S>& generators, double tol = 1e-9);

/** Unit-separability decision from the raw pairings <rho, E> and <E, E'>.
 * R is spanned by projected states in a non-orthogonal basis, and the final
 * test is lp_membership of J(id_R) in the product cone. */
template <class S>
VerdictKind oracle_classify(const Scenario& sc, const Tolerances& tol = {});

VerdictKind oracle_classify_auto(const Scenario& sc, const Tolerances& tol = {});

}  // namespace conekit::oracle
