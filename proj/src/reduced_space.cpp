#include "conekit/reduced_space.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace conekit {

namespace {

Subspace<double> float_orthobasis(const Mat<double>& vectors, const Vec<double>& metric,
                                  double rank_tol) {
  const int n = static_cast<int>(metric.size());
  Vec<double> sq(n), isq(n);
  for (int i = 0; i < n; ++i) {
    sq[i] = std::sqrt(metric[i]);
    isq[i] = 1.0 / sq[i];
  }
  // Work in Euclidean coordinates u = sqrt(g) * v.
  Eigen::MatrixXd u(vectors.size(), n);
  for (std::size_t r = 0; r < vectors.size(); ++r)
    for (int i = 0; i < n; ++i) u(r, i) = sq[i] * vectors[r][i];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(u, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int svd_rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * smax && sv(i) > 0) ++svd_rank;

  // Modified Gram-Schmidt in input order with one reorthogonalization pass.
  std::vector<Eigen::VectorXd> q;
  double vmax = 0;
  for (Eigen::Index r = 0; r < u.rows(); ++r) vmax = std::max(vmax, u.row(r).norm());
  for (Eigen::Index r = 0; r < u.rows() && static_cast<int>(q.size()) < svd_rank; ++r) {
    Eigen::VectorXd w = u.row(r).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : q) w -= b.dot(w) * b;
    const double nw = w.norm();
    if (nw > rank_tol * vmax && nw > 0) q.push_back(w / nw);
  }
  if (static_cast<int>(q.size()) != svd_rank) {
    q.clear();
    for (int i = 0; i < svd_rank; ++i) q.push_back(svd.matrixV().col(i));
  }

  Subspace<double> s;
  s.ambient_dim = n;
  for (const auto& b : q) {
    Vec<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = isq[i] * b(i);
    s.basis.push_back(std::move(v));
    s.gram.push_back(1.0);
  }
  return s;
}

Subspace<Rational> exact_orthobasis(const Mat<Rational>& vectors, const Vec<Rational>& metric) {
  Subspace<Rational> s;
  s.ambient_dim = static_cast<int>(metric.size());
  for (const auto& v : vectors) {
    Vec<Rational> w = v;
    for (std::size_t j = 0; j < s.basis.size(); ++j) {
      const Rational c = dot(s.basis[j], v, metric) / s.gram[j];
      if (!c.is_zero()) axpy(Rational(-c), s.basis[j], w);
    }
    if (is_zero_vec(w, 0.0)) continue;
    w = primitive_integer(w);
    s.gram.push_back(dot(w, w, metric));
    s.basis.push_back(std::move(w));
  }
  return s;
}

template <class S>
void check_dims(const Mat<S>& vs, std::size_t n, const char* what) {
  for (const auto& v : vs)
    if (v.size() != n) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

template <class S>
ReducedSpace<S> build(const Mat<S>& outer, const Mat<S>& inner, const Mat<S>& states,
                      const Mat<S>& effects, const Vec<S>& unit, const Vec<S>& metric,
                      double rank_tol, bool swapped) {
  if (states.empty() || effects.empty())
    throw std::invalid_argument("reduced_space: empty generator list");
  check_dims(states, metric.size(), "reduced_space");
  check_dims(effects, metric.size(), "reduced_space");
  const auto host = span_orthobasis(inner, metric, rank_tol);
  Mat<S> projected;
  projected.reserve(outer.size());
  for (const auto& v : outer) projected.push_back(project(v, host, metric));
  ReducedSpace<S> r;
  r.subspace = span_orthobasis(projected, metric, rank_tol);
  r.dim = r.subspace.rank();
  r.metric = metric;
  r.swapped = swapped;
  for (const auto& v : states) r.states.push_back(subspace_coords(v, r.subspace, metric));
  for (const auto& v : effects) r.effects.push_back(subspace_coords(v, r.subspace, metric));
  r.unit = subspace_coords(unit, r.subspace, metric);
  return r;
}

}  // namespace

template <class S>
Subspace<S> span_orthobasis(const Mat<S>& vectors, const Vec<S>& metric, double rank_tol) {
  if (vectors.empty()) throw std::invalid_argument("span_orthobasis: empty input");
  check_dims(vectors, metric.size(), "span_orthobasis");
  if constexpr (Arith<S>::exact) {
    (void)rank_tol;
    return exact_orthobasis(vectors, metric);
  } else {
    return float_orthobasis(vectors, metric, rank_tol);
  }
}

template <class S>
Vec<S> subspace_coords(const Vec<S>& v, const Subspace<S>& s, const Vec<S>& metric) {
  if (static_cast<int>(v.size()) != s.ambient_dim) throw std::invalid_argument("project: dimension mismatch");
  Vec<S> c(s.basis.size());
  for (std::size_t i = 0; i < s.basis.size(); ++i) c[i] = dot(s.basis[i], v, metric) / s.gram[i];
  return c;
}

template <class S>
Vec<S> embed(const Vec<S>& coords, const Subspace<S>& s) {
  Vec<S> out(s.ambient_dim, S(0));
  for (std::size_t i = 0; i < s.basis.size(); ++i) axpy(coords[i], s.basis[i], out);
  return out;
}

template <class S>
Vec<S> project(const Vec<S>& v, const Subspace<S>& s, const Vec<S>& metric) {
  return embed(subspace_coords(v, s, metric), s);
}

template <class S>
ReducedSpace<S> reduced_space(const Mat<S>& states, const Mat<S>& effects, const Vec<S>& unit,
                              const Vec<S>& metric, double rank_tol) {
  return build(states, effects, states, effects, unit, metric, rank_tol, false);
}

template <class S>
ReducedSpace<S> swapped_reduced_space(const Mat<S>& states, const Mat<S>& effects,
                                      const Vec<S>& unit, const Vec<S>& metric, double rank_tol) {
  return build(effects, states, states, effects, unit, metric, rank_tol, true);
}

#define CONEKIT_INSTANTIATE(S)                                                                   \
  template Subspace<S> span_orthobasis<S>(const Mat<S>&, const Vec<S>&, double);                 \
  template Vec<S> project<S>(const Vec<S>&, const Subspace<S>&, const Vec<S>&);                  \
  template Vec<S> subspace_coords<S>(const Vec<S>&, const Subspace<S>&, const Vec<S>&);          \
  template Vec<S> embed<S>(const Vec<S>&, const Subspace<S>&);                                   \
  template ReducedSpace<S> reduced_space<S>(const Mat<S>&, const Mat<S>&, const Vec<S>&,         \
                                            const Vec<S>&, double);                              \
  template ReducedSpace<S> swapped_reduced_space<S>(const Mat<S>&, const Mat<S>&, const Vec<S>&, \
                                                    const Vec<S>&, double);

CONEKIT_INSTANTIATE(double)
CONEKIT_INSTANTIATE(Rational)

#undef CONEKIT_INSTANTIATE

}  // namespace conekit
