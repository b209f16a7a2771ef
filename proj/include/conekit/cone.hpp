#pragma once

#include <optional>
#include <string>

#include "conekit/numeric.hpp"

namespace conekit {

/** Finitely generated cone, V-representation. Rays are stored in canonical
 * form once they pass through `canonicalize`: unit Euclidean norm in floating
 * point, primitive integer vectors (positive multiple of the input) in exact
 * mode. */
template <class S>
struct ConeV {
  int ambient_dim = 0;
  Mat<S> rays;
  std::optional<bool> pointed;
  std::optional<bool> spanning;
  bool rays_extremal = false;
};

/// Intersection of halfspaces <n, .> >= 0.
template <class S>
struct ConeH {
  int ambient_dim = 0;
  Mat<S> normals;
};

template <class S>
struct PositivityFunctional {
  Vec<S> coords;
};

template <class S>
struct PointednessReport {
  std::optional<PositivityFunctional<S>> functional;
  Vec<S> line;  // a generator r with -r also in the cone, when not pointed
  bool pointed() const { return functional.has_value(); }
};

template <class S>
struct MembershipResult {
  bool inside = false;
  Vec<S> coefficients;  // nonnegative, one per ray, when inside
  Vec<S> normal;        // <normal, ray> >= 0 for all rays, <normal, point> < 0
};

struct EnumerationOptions {
  double tol = 1e-9;
  int threads = 1;
  bool check_preconditions = true;
  std::size_t max_rays = 5'000'000;
};

template <class S>
Vec<S> canonical_ray(const Vec<S>& v);

/// Drops zero vectors, normalizes, merges parallel duplicates and sorts
/// lexicographically.
template <class S>
Mat<S> canonicalize(const Mat<S>& rays, double tol = 1e-9);

template <class S>
ConeV<S> make_cone(int ambient_dim, const Mat<S>& rays, double tol = 1e-9);

template <class S>
ConeV<S> extreme_ray_filter(const ConeV<S>& c, double tol = 1e-9);

template <class S>
PointednessReport<S> is_pointed(const ConeV<S>& c, double tol = 1e-9);

template <class S>
bool is_spanning(const ConeV<S>& c, double tol = 1e-9);

/// Extremal rays of the polar {y : <x, y> >= 0 for all x in c}, plain dot
/// product. Double description with a combinatorial adjacency test.
template <class S>
ConeV<S> vertex_enumeration(const ConeV<S>& c, const EnumerationOptions& opts = {});

template <class S>
bool double_polar_check(const ConeV<S>& c, const EnumerationOptions& opts = {});

template <class S>
MembershipResult<S> membership(const Vec<S>& point, const ConeV<S>& c, double tol = 1e-9);

/// Lexicographic comparison used for the canonical ray order.
template <class S>
bool lex_less(const Vec<S>& a, const Vec<S>& b);

template <class S>
std::string cone_to_json(const ConeV<S>& c);

}  // namespace conekit
