#include "conekit/oracle.hpp"

#include <algorithm>
#include <boost/multiprecision/integer.hpp>

namespace conekit::oracle {

namespace {

template <class S>
bool is_nonzero(const S& x, double tol) {
  if constexpr (Arith<S>::exact) {
    (void)tol;
    return !x.is_zero();
  } else {
    return std::abs(x) > tol;
  }
}

template <class S>
int pick_pivot(const Mat<S>& a, int col, int from, double tol) {
  int piv = -1;
  double best = tol;
  for (int r = from; r < static_cast<int>(a.size()); ++r) {
    if constexpr (Arith<S>::exact) {
      if (!a[r][col].is_zero()) return r;
    } else if (std::abs(a[r][col]) > best) {
      best = std::abs(a[r][col]);
      piv = r;
    }
  }
  return piv;
}

/// Determinant by elimination; the empty matrix has determinant 1.
template <class S>
S det(Mat<S> a, double tol) {
  const int n = static_cast<int>(a.size());
  S d = 1;
  for (int c = 0; c < n; ++c) {
    const int p = pick_pivot(a, c, c, tol);
    if (p < 0) return S(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (!is_nonzero(a[r][c], 0.0)) continue;
      const S f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

template <class S>
int rank_of(Mat<S> a, int ncols, double tol) {
  int r = 0;
  for (int c = 0; c < ncols && r < static_cast<int>(a.size()); ++c) {
    const int p = pick_pivot(a, c, r, tol);
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    for (int i = r + 1; i < static_cast<int>(a.size()); ++i) {
      const S f = a[i][c] / a[r][c];
      for (int k = c; k < ncols; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

template <class S>
Vec<S> solve_square(Mat<S> a, Vec<S> b, double tol) {
  const int n = static_cast<int>(a.size());
  for (int c = 0; c < n; ++c) {
    const int p = pick_pivot(a, c, c, tol);
    if (p < 0) throw Error("oracle: singular system");
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c || !is_nonzero(a[r][c], 0.0)) continue;
      const S f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

template <class S>
S plain_dot(const Vec<S>& a, const Vec<S>& b) {
  S acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <class S>
double euclid(const Vec<S>& v) {
  double acc = 0;
  for (const auto& x : v) {
    const double d = Arith<S>::to_double(x);
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Positive rescaling to a primitive integer vector (exact) or unit length.
template <class S>
Vec<S> normalize_ray(Vec<S> v) {
  if constexpr (Arith<S>::exact) {
    Integer l = 1;
    for (const auto& x : v) l = boost::multiprecision::lcm(l, Integer(denominator(x)));
    Integer g = 0;
    for (const auto& x : v) g = boost::multiprecision::gcd(g, Integer(numerator(x) * (l / denominator(x))));
    for (auto& x : v) x = Rational(numerator(x) * (l / denominator(x)) / g);
  } else {
    const double n = euclid(v);
    for (auto& x : v) x /= n;
  }
  return v;
}

template <class S>
bool same_ray(const Vec<S>& a, const Vec<S>& b) {
  if constexpr (Arith<S>::exact) {
    return a == b;
  } else {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > 1e-7) return false;
    return true;
  }
}

/// Dense phase-1 tableau with Bland's rule.
template <class S>
class Phase1 {
 public:
  Phase1(const Mat<S>& a, const Vec<S>& b, double tol) : m_(static_cast<int>(a.size())), tol_(tol) {
    n_ = m_ ? static_cast<int>(a[0].size()) : 0;
    t_.assign(m_, Vec<S>(n_ + m_ + 1, S(0)));
    sign_.assign(m_, 1);
    for (int i = 0; i < m_; ++i) {
      sign_[i] = Arith<S>::sign(b[i], 0.0) < 0 ? -1 : 1;
      for (int j = 0; j < n_; ++j) t_[i][j] = sign_[i] > 0 ? a[i][j] : S(-a[i][j]);
      t_[i][n_ + i] = 1;
      t_[i][n_ + m_] = sign_[i] > 0 ? b[i] : S(-b[i]);
      basis_.push_back(n_ + i);
    }
    cost_.assign(n_ + m_ + 1, S(0));
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < m_; ++i) cost_[j] -= t_[i][j];
    for (int i = 0; i < m_; ++i) cost_[n_ + m_] -= t_[i][n_ + m_];
  }

  void run(std::size_t max_iter = 100000) {
    for (std::size_t it = 0; it < max_iter; ++it) {
      int enter = -1;
      for (int j = 0; j < n_ + m_; ++j)
        if (Arith<S>::sign(cost_[j], tol_) < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return;
      int leave = -1;
      S best = 0;
      for (int i = 0; i < m_; ++i) {
        if (Arith<S>::sign(t_[i][enter], tol_) <= 0) continue;
        const S ratio = t_[i][n_ + m_] / t_[i][enter];
        if (leave < 0 || ratio < best || (!(best < ratio) && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) throw Error("oracle: phase-1 program unbounded");
      pivot(leave, enter);
    }
    throw Error("oracle: simplex iteration limit (numerical stall)");
  }

  S infeasibility() const { return -cost_[n_ + m_]; }

  Vec<S> solution() const {
    Vec<S> x(n_, S(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = t_[i][n_ + m_];
    return x;
  }

  /// y with A^T y <= 0 and b^T y > 0 for the original (unflipped) rows.
  Vec<S> farkas() const {
    Vec<S> y(m_);
    for (int i = 0; i < m_; ++i) {
      const S yi = S(1) - cost_[n_ + i];
      y[i] = sign_[i] > 0 ? yi : S(-yi);
    }
    return y;
  }

 private:
  void pivot(int row, int col) {
    const S p = t_[row][col];
    for (auto& x : t_[row]) x /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const S f = t_[i][col];
      if (!is_nonzero(f, 0.0)) continue;
      for (int j = 0; j <= n_ + m_; ++j) t_[i][j] -= f * t_[row][j];
    }
    const S f = cost_[col];
    for (int j = 0; j <= n_ + m_; ++j) cost_[j] -= f * t_[row][j];
    basis_[row] = col;
  }

  int m_, n_ = 0;
  double tol_;
  Mat<S> t_;
  Vec<S> cost_;
  std::vector<int> sign_;
  std::vector<int> basis_;
};

}  // namespace

template <class S>
Mat<S> brute_force_polar_rays(const ConeV<S>& c) {
  const int d = c.ambient_dim;
  if (d < 1 || d > kMaxAmbient)
    throw ResourceError("brute_force_polar_rays: ambient dimension " + std::to_string(d) + " outside [1, " +
                        std::to_string(kMaxAmbient) + "]");
  if (c.rays.size() > kMaxRays)
    throw ResourceError("brute_force_polar_rays: " + std::to_string(c.rays.size()) + " rays exceed the budget of " +
                        std::to_string(kMaxRays));
  const int n = static_cast<int>(c.rays.size());
  const int k = d - 1;
  if (n < k) return {};
  double scale = 0;
  for (const auto& r : c.rays) scale = std::max(scale, euclid(r));
  const double tol = 1e-9 * std::max(1.0, std::pow(scale, k));

  Mat<S> out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    // Cofactor expansion: x_j = (-1)^j det(A without column j).
    Vec<S> x(d);
    for (int j = 0; j < d; ++j) {
      Mat<S> minor(k, Vec<S>(k));
      for (int r = 0; r < k; ++r)
        for (int cc = 0, col = 0; cc < d; ++cc)
          if (cc != j) minor[r][col++] = c.rays[idx[r]][cc];
      x[j] = det(minor, tol);
      if (j % 2 == 1) x[j] = -x[j];
    }
    if (euclid(x) > tol) {
      const double xn = euclid(x);
      bool pos = false, neg = false;
      for (const auto& r : c.rays) {
        const S v = plain_dot(x, r);
        const int s = Arith<S>::sign(v, 1e-9 * xn * euclid(r));
        pos = pos || s > 0;
        neg = neg || s < 0;
      }
      if (!(pos && neg)) {
        if (neg)
          for (auto& v : x) v = -v;
        if constexpr (!Arith<S>::exact)
          for (auto& v : x)
            if (std::abs(v) <= tol) v = 0;
        out.push_back(normalize_ray(x));
      }
    }
    // next combination
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(),
            [](const Vec<S>& a, const Vec<S>& b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); });
  Mat<S> uniq;
  for (auto& r : out)
    if (uniq.empty() || !std::any_of(uniq.begin(), uniq.end(), [&](const Vec<S>& u) { return same_ray(u, r); }))
      uniq.push_back(std::move(r));
  return uniq;
}

template <class S>
OracleReport<S> lp_membership(const Vec<S>& point, const Mat<S>& generators, double tol) {
  const int m = static_cast<int>(point.size());
  const int n = static_cast<int>(generators.size());
  Mat<S> a(m, Vec<S>(n));
  for (int j = 0; j < n; ++j) {
    if (static_cast<int>(generators[j].size()) != m) throw std::invalid_argument("lp_membership: dimension mismatch");
    for (int i = 0; i < m; ++i) a[i][j] = generators[j][i];
  }
  double scale = euclid(point);
  for (const auto& g : generators) scale = std::max(scale, euclid(g));
  const double ltol = tol * std::max(1.0, scale);

  Phase1<S> lp(a, point, ltol);
  lp.run();
  OracleReport<S> rep;
  if (Arith<S>::sign(lp.infeasibility(), ltol) <= 0) {
    rep.member = true;
    rep.coefficients = lp.solution();
    for (auto& x : rep.coefficients)
      if (Arith<S>::sign(x, 0.0) < 0) {
        if constexpr (Arith<S>::exact) throw Error("oracle: negative coefficient");
        x = 0;
      }
    Vec<S> recon(m, S(0));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i) recon[i] += rep.coefficients[j] * a[i][j];
    for (int i = 0; i < m; ++i) {
      const S diff = recon[i] - point[i];
      if constexpr (Arith<S>::exact) {
        if (!diff.is_zero()) throw Error("oracle: coefficients do not reproduce the point");
      } else if (std::abs(diff) > 1e-8 * std::max(1.0, scale)) {
        throw Error("oracle: coefficients do not reproduce the point (numerical stall)");
      }
    }
    return rep;
  }
  const Vec<S> y = lp.farkas();
  rep.normal.resize(m);
  for (int i = 0; i < m; ++i) rep.normal[i] = -y[i];
  const double nn = euclid(rep.normal);
  for (int j = 0; j < n; ++j) {
    const S v = plain_dot(rep.normal, generators[j]);
    if (Arith<S>::sign(v, 1e-8 * nn * std::max(1.0, euclid(generators[j]))) < 0)
      throw Error("oracle: Farkas normal is negative on a generator (numerical stall)");
  }
  const S pv = plain_dot(rep.normal, point);
  rep.margin = Arith<S>::to_double(pv) / nn;
  if (Arith<S>::sign(pv, 0.0) >= 0) throw Error("oracle: Farkas normal does not separate the point");
  return rep;
}

template <class S>
VerdictKind oracle_classify(const Scenario& sc, const Tolerances& tol) {
  const auto amb = ambient_data<S>(sc);
  auto ip = [&](const Vec<S>& x, const Vec<S>& y) {
    S acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += amb.metric[i] * x[i] * y[i];
    return acc;
  };
  const double rtol = Arith<S>::exact ? 0.0 : tol.rank_tol;

  // Independent effects, chosen greedily through their Gram determinant.
  std::vector<int> eb;
  Mat<S> k;
  for (int l = 0; l < static_cast<int>(amb.effects.size()); ++l) {
    Mat<S> trial(eb.size() + 1, Vec<S>(eb.size() + 1));
    std::vector<int> ids = eb;
    ids.push_back(l);
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j) trial[i][j] = ip(amb.effects[ids[i]], amb.effects[ids[j]]);
    if (rank_of(trial, static_cast<int>(ids.size()), rtol) == static_cast<int>(ids.size())) {
      eb = ids;
      k = trial;
    }
  }
  // p_s[b] = <rho_s, E_b> and u_s = K^{-1} p_s (projection onto span(e)).
  const int ns = static_cast<int>(amb.states.size());
  Mat<S> p(ns), u(ns);
  for (int s = 0; s < ns; ++s) {
    for (int b : eb) p[s].push_back(ip(amb.states[s], amb.effects[b]));
    u[s] = solve_square(k, p[s], rtol);
  }
  // Basis of R: projected states with a nonsingular Gram matrix H.
  std::vector<int> rb;
  Mat<S> h;
  for (int s = 0; s < ns; ++s) {
    std::vector<int> ids = rb;
    ids.push_back(s);
    Mat<S> trial(ids.size(), Vec<S>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j) trial[i][j] = plain_dot(p[ids[i]], u[ids[j]]);
    if (rank_of(trial, static_cast<int>(ids.size()), rtol) == static_cast<int>(ids.size())) {
      rb = ids;
      h = trial;
    }
  }
  const int n = static_cast<int>(rb.size());
  if (n > kMaxReducedDim)
    throw ResourceError("oracle_classify: dim(R) = " + std::to_string(n) + " exceeds " + std::to_string(kMaxReducedDim));

  // Functionals <r_i, .> of the reduced states and effects; their polars are
  // the polar cones in basis coordinates.
  ConeV<S> sf, ef;
  sf.ambient_dim = ef.ambient_dim = n;
  for (int s = 0; s < ns; ++s) {
    Vec<S> v(n);
    for (int i = 0; i < n; ++i) v[i] = plain_dot(p[rb[i]], u[s]);
    if (euclid(v) > 1e-12) sf.rays.push_back(v);
  }
  for (const auto& e : amb.effects) {
    Vec<S> v(n);
    for (int i = 0; i < n; ++i) v[i] = ip(amb.states[rb[i]], e);
    if (euclid(v) > 1e-12) ef.rays.push_back(v);
  }
  auto dedupe = [](Mat<S> rays) {
    for (auto& r : rays) r = normalize_ray(r);
    Mat<S> out;
    for (auto& r : rays)
      if (!std::any_of(out.begin(), out.end(), [&](const Vec<S>& o) { return same_ray(o, r); })) out.push_back(r);
    return out;
  };
  sf.rays = dedupe(sf.rays);
  ef.rays = dedupe(ef.rays);
  if (rank_of(sf.rays, n, rtol) < n || rank_of(ef.rays, n, rtol) < n)
    throw PreconditionError("oracle_classify: reduced cones do not span R");
  const auto ms = brute_force_polar_rays(sf);
  const auto me = brute_force_polar_rays(ef);

  // J(id_R) = sum_ij (H^{-1})_ij r_i (x) r_j.
  Vec<S> j(static_cast<std::size_t>(n) * n);
  for (int c = 0; c < n; ++c) {
    Vec<S> e(n, S(0));
    e[c] = 1;
    const auto col = solve_square(h, e, rtol);
    for (int i = 0; i < n; ++i) j[i * n + c] = col[i];
  }
  Mat<S> gens;
  for (const auto& f : ms)
    for (const auto& g : me) {
      Vec<S> t;
      t.reserve(static_cast<std::size_t>(n) * n);
      for (const auto& a : f)
        for (const auto& b : g) t.push_back(a * b);
      gens.push_back(std::move(t));
    }
  const auto rep = lp_membership(j, gens, 1e-9);
  if (rep.member) return VerdictKind::Classical;
  if constexpr (!Arith<S>::exact) {
    if (rep.margin > -tol.verdict_tol) return VerdictKind::Classical;
  }
  return VerdictKind::NonClassical;
}

VerdictKind oracle_classify_auto(const Scenario& sc, const Tolerances& tol) {
  return sc.exact_available() ? oracle_classify<Rational>(sc, tol) : oracle_classify<double>(sc, tol);
}

template Mat<double> brute_force_polar_rays<double>(const ConeV<double>&);
template Mat<Rational> brute_force_polar_rays<Rational>(const ConeV<Rational>&);
template OracleReport<double> lp_membership<double>(const Vec<double>&, const Mat<double>&, double);
template OracleReport<Rational> lp_membership<Rational>(const Vec<Rational>&, const Mat<Rational>&, double);
template VerdictKind oracle_classify<double>(const Scenario&, const Tolerances&);
template VerdictKind oracle_classify<Rational>(const Scenario&, const Tolerances&);

}  // namespace conekit::oracle
