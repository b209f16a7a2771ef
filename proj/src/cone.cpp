#include "conekit/cone.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <nlohmann/json.hpp>
#include <thread>

#include "conekit/linalg.hpp"
#include "conekit/lp.hpp"

namespace conekit {

namespace {

/** Element type used inside the double description loop. Exact cones run on
 * primitive integer vectors, which keeps dot products and combinations free
 * of gcd work on denominators. */
template <class S>
struct DDArith;

template <>
struct DDArith<double> {
  using Elem = double;
  static Vec<double> in(const Vec<double>& v) { return v; }
  static Vec<double> out(const Vec<double>& v) { return v; }
  static void normalize(Vec<double>& v) {
    const double n = norm2(v);
    if (n > 0)
      for (auto& x : v) x /= n;
  }
  static int sign(double x, double tol) { return Arith<double>::sign(x, tol); }
  static Vec<double> approx(const Vec<double>& v) { return v; }
};

template <>
struct DDArith<Rational> {
  using Elem = Integer;
  static Vec<Integer> in(const Vec<Rational>& v) {
    const auto p = primitive_integer(v);
    Vec<Integer> out;
    out.reserve(p.size());
    for (const auto& x : p) out.push_back(boost::multiprecision::numerator(x));
    return out;
  }
  static Vec<Rational> out(const Vec<Integer>& v) { return Vec<Rational>(v.begin(), v.end()); }
  static void normalize(Vec<Integer>& v) {
    Integer g = 0;
    for (const auto& x : v) {
      g = boost::multiprecision::gcd(g, x);
      if (g == 1) return;
    }
    if (g > 1)
      for (auto& x : v) x /= g;
  }
  static int sign(const Integer& x, double) { return x.sign(); }
  static Vec<double> approx(const Vec<Integer>& v) {
    Vec<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].convert_to<double>();
    const double n = norm2(out);
    if (n > 0)
      for (auto& x : out) x /= n;
    return out;
  }
};

template <class E>
E dot_e(const Vec<E>& a, const Vec<E>& b) {
  E acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/** Incremental basis used to pick d independent constraints for the initial
 * simplicial cone. */
template <class S>
class IncrementalBasis {
 public:
  IncrementalBasis(int d, double tol) : d_(d), tol_(tol) {}

  bool try_add(const Vec<S>& v) {
    Vec<S> r = v;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const S f = r[pivots_[k]];
      if (Arith<S>::is_zero(f, 0.0)) continue;
      axpy(S(-f), rows_[k], r);
    }
    int piv = -1;
    double best = Arith<S>::exact ? 0.0 : tol_;
    for (int j = 0; j < d_; ++j) {
      const double m = std::abs(Arith<S>::to_double(r[j]));
      if constexpr (Arith<S>::exact) {
        if (!r[j].is_zero()) {
          piv = j;
          break;
        }
      } else if (m > best) {
        best = m;
        piv = j;
      }
    }
    if (piv < 0) return false;
    const S inv = S(1) / r[piv];
    for (auto& x : r) x *= inv;
    for (auto& row : rows_) {
      const S f = row[piv];
      if (!Arith<S>::is_zero(f, 0.0)) axpy(S(-f), r, row);
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(piv);
    return true;
  }

  int size() const { return static_cast<int>(rows_.size()); }

 private:
  int d_;
  double tol_;
  Mat<S> rows_;
  std::vector<int> pivots_;
};

template <class S>
class DoubleDescription {
  using A = DDArith<S>;
  using E = typename A::Elem;
  using Bits = boost::dynamic_bitset<>;

  struct RayRec {
    Vec<E> v;
    Vec<double> approx;
    Bits tight;
  };

 public:
  DoubleDescription(const Mat<S>& constraints, int d, const EnumerationOptions& opts)
      : d_(d), m_(static_cast<int>(constraints.size())), opts_(opts) {
    for (const auto& c : constraints) {
      cons_.push_back(A::in(c));
      cons_approx_.push_back(A::approx(cons_.back()));
    }
  }

  Mat<S> run() {
    initialize();
    std::vector<bool> done(m_, false);
    for (int b : basis_) done[b] = true;
    int remaining = m_ - d_;
    while (remaining-- > 0) {
      const int k = next_constraint(done);
      done[k] = true;
      insert(k);
      if (rays_.size() > opts_.max_rays)
        throw ResourceError("vertex enumeration exceeded the ray budget (" +
                            std::to_string(opts_.max_rays) + ")");
    }
    Mat<S> out;
    out.reserve(rays_.size());
    for (const auto& r : rays_) out.push_back(A::out(r.v));
    return out;
  }

 private:
  void initialize() {
    IncrementalBasis<S> inc(d_, 1e-9);
    for (int i = 0; i < m_ && inc.size() < d_; ++i) {
      if (inc.try_add(A::out(cons_[i]))) basis_.push_back(i);
    }
    if (static_cast<int>(basis_.size()) < d_)
      throw PreconditionError("vertex enumeration: generators do not span the ambient space");
    Mat<S> xb(d_, Vec<S>(d_));
    for (int i = 0; i < d_; ++i) {
      const auto row = A::out(cons_[basis_[i]]);
      for (int j = 0; j < d_; ++j) xb[i][j] = row[j];
    }
    auto inv = inverse(xb, 1e-14);
    if (!inv) throw PreconditionError("vertex enumeration: singular initial basis");
    for (int j = 0; j < d_; ++j) {
      Vec<S> col(d_);
      for (int i = 0; i < d_; ++i) col[i] = (*inv)[i][j];
      RayRec rec;
      rec.v = A::in(col);
      A::normalize(rec.v);
      rec.approx = A::approx(rec.v);
      rec.tight = Bits(m_);
      for (int i = 0; i < d_; ++i)
        if (i != j) rec.tight.set(basis_[i]);
      rays_.push_back(std::move(rec));
    }
  }

  int next_constraint(const std::vector<bool>& done) const {
    int best = -1;
    long best_count = -1;
    for (int k = 0; k < m_; ++k) {
      if (done[k]) continue;
      long count = 0;
      for (const auto& r : rays_)
        if (dot(r.approx, cons_approx_[k]) > 1e-9) ++count;
      if (count > best_count) {
        best_count = count;
        best = k;
      }
    }
    return best;
  }

  /// Combinatorial test: p and n are adjacent iff no third ray is tight on
  /// every constraint they share.
  bool adjacent(int p, int n, const Bits& common) const {
    const int need = d_ - 2;
    if (need <= 0) return true;
    if (static_cast<int>(common.count()) < need) return false;
    for (std::size_t r = 0; r < rays_.size(); ++r) {
      if (static_cast<int>(r) == p || static_cast<int>(r) == n) continue;
      if (common.is_subset_of(rays_[r].tight)) return false;
    }
    return true;
  }

  void insert(int k) {
    const auto& x = cons_[k];
    std::vector<int> pos, neg, zero;
    std::vector<E> val(rays_.size());
    for (std::size_t r = 0; r < rays_.size(); ++r) {
      val[r] = dot_e(x, rays_[r].v);
      const int s = A::sign(val[r], opts_.tol);
      (s > 0 ? pos : s < 0 ? neg : zero).push_back(static_cast<int>(r));
    }
    if (neg.empty()) {
      for (int z : zero) rays_[z].tight.set(k);
      return;
    }

    // Adjacency tests, split over contiguous blocks of positive rays so the
    // merged result is independent of the thread count.
    const int threads = std::max(1, std::min<int>(opts_.threads, static_cast<int>(pos.size())));
    std::vector<std::vector<std::pair<int, int>>> found(threads);
    auto work = [&](int t) {
      const std::size_t lo = pos.size() * t / threads;
      const std::size_t hi = pos.size() * (t + 1) / threads;
      Bits common(m_);
      for (std::size_t a = lo; a < hi; ++a) {
        for (int n : neg) {
          common = rays_[pos[a]].tight;
          common &= rays_[n].tight;
          if (adjacent(pos[a], n, common)) found[t].emplace_back(pos[a], n);
        }
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }

    std::vector<RayRec> next;
    next.reserve(pos.size() + zero.size());
    // Keep surviving rays in their previous relative order.
    for (std::size_t r = 0; r < rays_.size(); ++r) {
      const int s = A::sign(val[r], opts_.tol);
      if (s < 0) continue;
      if (s == 0) rays_[r].tight.set(k);
      next.push_back(rays_[r]);
    }
    for (const auto& block : found) {
      for (auto [p, n] : block) {
        RayRec rec;
        rec.v.resize(d_);
        const E& sp = val[p];
        const E& sn = val[n];
        for (int j = 0; j < d_; ++j) rec.v[j] = sp * rays_[n].v[j] - sn * rays_[p].v[j];
        A::normalize(rec.v);
        rec.approx = A::approx(rec.v);
        rec.tight = rays_[p].tight;
        rec.tight &= rays_[n].tight;
        rec.tight.set(k);
        next.push_back(std::move(rec));
      }
    }
    rays_ = std::move(next);
  }

  int d_;
  int m_;
  EnumerationOptions opts_;
  std::vector<Vec<E>> cons_;
  std::vector<Vec<double>> cons_approx_;
  std::vector<int> basis_;
  std::vector<RayRec> rays_;
};

}  // namespace

template <class S>
bool lex_less(const Vec<S>& a, const Vec<S>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

template <class S>
Vec<S> canonical_ray(const Vec<S>& v) {
  if constexpr (Arith<S>::exact) {
    return primitive_integer(v);
  } else {
    const double n = norm2(v);
    if (n == 0) return v;
    return scaled(v, 1.0 / n);
  }
}

template <class S>
Mat<S> canonicalize(const Mat<S>& rays, double tol) {
  Mat<S> out;
  out.reserve(rays.size());
  for (const auto& r : rays) {
    if constexpr (Arith<S>::exact) {
      if (is_zero_vec(r, 0.0)) continue;
    } else {
      if (norm2(r) <= tol) continue;
    }
    out.push_back(canonical_ray(r));
  }
  std::sort(out.begin(), out.end(), lex_less<S>);
  if constexpr (Arith<S>::exact) {
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  } else {
    Mat<S> kept;
    kept.reserve(out.size());
    for (auto& r : out) {
      bool dup = false;
      for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
        if ((*it)[0] < r[0] - tol) break;
        double diff = 0;
        for (std::size_t j = 0; j < r.size(); ++j) diff = std::max(diff, std::abs((*it)[j] - r[j]));
        if (diff <= tol) {
          dup = true;
          break;
        }
      }
      if (!dup) kept.push_back(std::move(r));
    }
    return kept;
  }
}

template <class S>
ConeV<S> make_cone(int ambient_dim, const Mat<S>& rays, double tol) {
  for (const auto& r : rays)
    if (static_cast<int>(r.size()) != ambient_dim)
      throw std::invalid_argument("make_cone: ray dimension mismatch");
  ConeV<S> c;
  c.ambient_dim = ambient_dim;
  c.rays = canonicalize(rays, tol);
  return c;
}

template <class S>
MembershipResult<S> membership(const Vec<S>& point, const ConeV<S>& c, double tol) {
  const int d = c.ambient_dim;
  if (static_cast<int>(point.size()) != d) throw std::invalid_argument("membership: dimension mismatch");
  MembershipResult<S> res;
  const int m = static_cast<int>(c.rays.size());
  if (m == 0) {
    if (is_zero_vec(point, tol)) {
      res.inside = true;
      return res;
    }
    res.normal = scaled(point, S(-1));
    return res;
  }
  Mat<S> a(d, Vec<S>(m));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < d; ++i) a[i][j] = c.rays[j][i];
  const auto lp = solve_lp(a, point, Vec<S>(m, S(0)), 1e-11);
  if (lp.status == LpStatus::Optimal) {
    res.inside = true;
    res.coefficients = lp.x;
    return res;
  }
  if (lp.status != LpStatus::Infeasible) throw Error("membership: linear program did not terminate");
  res.normal = scaled(lp.y, S(-1));
  // Certificate check: the normal must separate.
  for (const auto& r : c.rays)
    if (Arith<S>::sign(dot(res.normal, r), tol) < 0)
      throw Error("membership: separating normal failed verification");
  if (Arith<S>::sign(dot(res.normal, point), Arith<S>::exact ? 0.0 : tol * 1e-3) >= 0)
    throw Error("membership: separating normal failed verification");
  return res;
}

template <class S>
PointednessReport<S> is_pointed(const ConeV<S>& c, double tol) {
  PointednessReport<S> rep;
  const int d = c.ambient_dim;
  const int m = static_cast<int>(c.rays.size());
  if (m == 0) {
    rep.functional = PositivityFunctional<S>{Vec<S>(d, S(0))};
    return rep;
  }
  // Gordan alternative: sum lambda_i r_i = 0, sum lambda_i = 1, lambda >= 0 is
  // feasible exactly when the cone is not pointed. The Farkas certificate of
  // infeasibility yields the positivity functional.
  Mat<S> a(d + 1, Vec<S>(m));
  Vec<S> b(d + 1, S(0));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < d; ++i) a[i][j] = c.rays[j][i];
    a[d][j] = 1;
  }
  b[d] = 1;
  const auto lp = solve_lp(a, b, Vec<S>(m, S(0)), 1e-11);
  if (lp.status == LpStatus::Infeasible) {
    const S t = lp.y[d];
    Vec<S> l(d);
    for (int i = 0; i < d; ++i) l[i] = -lp.y[i] / t;
    // Rescale so that min <l, r> == 1.
    S minval = 0;
    bool first = true;
    for (const auto& r : c.rays) {
      const S v = dot(l, r);
      if (first || v < minval) minval = v;
      first = false;
    }
    if (Arith<S>::sign(minval, tol) <= 0) throw Error("is_pointed: functional failed verification");
    for (auto& x : l) x /= minval;
    rep.functional = PositivityFunctional<S>{std::move(l)};
    return rep;
  }
  if (lp.status != LpStatus::Optimal) throw Error("is_pointed: linear program did not terminate");
  for (int j = 0; j < m; ++j)
    if (Arith<S>::sign(lp.x[j], tol) > 0) {
      rep.line = c.rays[j];
      break;
    }
  return rep;
}

template <class S>
bool is_spanning(const ConeV<S>& c, double tol) {
  if (c.rays.empty()) return false;
  if (rank(c.rays, c.ambient_dim, tol) != c.ambient_dim) return false;
  Vec<S> neg_sum(c.ambient_dim, S(0));
  for (const auto& r : c.rays) axpy(S(-1), r, neg_sum);
  return !membership(neg_sum, c, tol).inside;
}

template <class S>
ConeV<S> extreme_ray_filter(const ConeV<S>& c, double tol) {
  const Mat<S> rays = canonicalize(c.rays, tol);
  ConeV<S> out;
  out.ambient_dim = c.ambient_dim;
  out.pointed = c.pointed;
  out.spanning = c.spanning;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    ConeV<S> others;
    others.ambient_dim = c.ambient_dim;
    for (std::size_t j = 0; j < rays.size(); ++j)
      if (j != i) others.rays.push_back(rays[j]);
    if (!membership(rays[i], others, tol).inside) out.rays.push_back(rays[i]);
  }
  out.rays_extremal = true;
  return out;
}

template <class S>
ConeV<S> vertex_enumeration(const ConeV<S>& c, const EnumerationOptions& opts) {
  Mat<S> gens = canonicalize(c.rays, opts.tol);
  ConeV<S> input;
  input.ambient_dim = c.ambient_dim;
  input.rays = gens;
  if (opts.check_preconditions) {
    if (rank(gens, c.ambient_dim, opts.tol) != c.ambient_dim)
      throw PreconditionError("vertex enumeration: cone is not spanning (rank " +
                              std::to_string(rank(gens, c.ambient_dim, opts.tol)) + " < " +
                              std::to_string(c.ambient_dim) + ")");
    if (!is_pointed(input, opts.tol).pointed())
      throw PreconditionError("vertex enumeration: cone is not pointed (contains a line)");
  }
  // Redundant generators would change the float rounding path of the
  // recursion, so float input is reduced to its extremal rays first.
  if constexpr (!Arith<S>::exact) {
    if (gens.size() > static_cast<std::size_t>(c.ambient_dim) &&
        (opts.check_preconditions || is_pointed(input, opts.tol).pointed()))
      gens = extreme_ray_filter(input, opts.tol).rays;
  }
  DoubleDescription<S> dd(gens, c.ambient_dim, opts);
  ConeV<S> out;
  out.ambient_dim = c.ambient_dim;
  out.rays = canonicalize(dd.run(), opts.tol);
  out.pointed = true;
  out.spanning = true;
  out.rays_extremal = true;
  return out;
}

template <class S>
bool double_polar_check(const ConeV<S>& c, const EnumerationOptions& opts) {
  const auto twice = vertex_enumeration(vertex_enumeration(c, opts), opts);
  const auto filtered = extreme_ray_filter(c, opts.tol);
  if (twice.rays.size() != filtered.rays.size()) return false;
  for (std::size_t i = 0; i < twice.rays.size(); ++i) {
    if constexpr (Arith<S>::exact) {
      if (twice.rays[i] != filtered.rays[i]) return false;
    } else {
      for (std::size_t j = 0; j < twice.rays[i].size(); ++j)
        if (std::abs(twice.rays[i][j] - filtered.rays[i][j]) > 1e-7) return false;
    }
  }
  return true;
}

template <class S>
std::string cone_to_json(const ConeV<S>& c) {
  nlohmann::json j;
  j["ambient_dim"] = c.ambient_dim;
  j["rays"] = nlohmann::json::array();
  for (const auto& r : c.rays) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : r) {
      if constexpr (Arith<S>::exact)
        row.push_back(to_string(x));
      else
        row.push_back(x);
    }
    j["rays"].push_back(row);
  }
  return j.dump();
}

#define CONEKIT_INSTANTIATE(S)                                                              \
  template bool lex_less<S>(const Vec<S>&, const Vec<S>&);                                  \
  template Vec<S> canonical_ray<S>(const Vec<S>&);                                          \
  template Mat<S> canonicalize<S>(const Mat<S>&, double);                                   \
  template ConeV<S> make_cone<S>(int, const Mat<S>&, double);                               \
  template ConeV<S> extreme_ray_filter<S>(const ConeV<S>&, double);                         \
  template PointednessReport<S> is_pointed<S>(const ConeV<S>&, double);                     \
  template bool is_spanning<S>(const ConeV<S>&, double);                                    \
  template ConeV<S> vertex_enumeration<S>(const ConeV<S>&, const EnumerationOptions&);      \
  template bool double_polar_check<S>(const ConeV<S>&, const EnumerationOptions&);         \
  template MembershipResult<S> membership<S>(const Vec<S>&, const ConeV<S>&, double);       \
  template std::string cone_to_json<S>(const ConeV<S>&);

CONEKIT_INSTANTIATE(double)
CONEKIT_INSTANTIATE(Rational)

#undef CONEKIT_INSTANTIATE

}  // namespace conekit
