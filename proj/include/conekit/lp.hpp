#pragma once

#include "conekit/numeric.hpp"

namespace conekit {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

/** Result of  min c.x  s.t.  A x = b, x >= 0.
 *
 * Optimal: `x` is a basic optimal solution, `y` the simplex multipliers
 * (A^T y <= c, b.y = objective). Infeasible: `y` is a Farkas certificate with
 * A^T y <= 0 and b.y > 0. */
template <class S>
struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  Vec<S> x;
  Vec<S> y;
  S objective = 0;
  std::vector<int> basis;  // basic column per row; -1 for a redundant row
};

/** Dense two-phase tableau simplex. Dantzig pricing, switching to Bland's rule
 * after a run of degenerate pivots, which keeps it finite. In exact mode all
 * comparisons are exact and `tol` is ignored. */
template <class S>
class TableauSimplex {
 public:
  TableauSimplex(const Mat<S>& a, const Vec<S>& b, double tol)
      : m_(static_cast<int>(b.size())),
        n_(a.empty() ? 0 : static_cast<int>(a[0].size())),
        tol_(tol),
        t_(m_, Vec<S>(n_ + m_, S(0))),
        rhs_(m_),
        sign_(m_, 1),
        basis_(m_) {
    for (int i = 0; i < m_; ++i) {
      sign_[i] = Arith<S>::sign(b[i], 0.0) < 0 ? -1 : 1;
      for (int j = 0; j < n_; ++j) t_[i][j] = sign_[i] < 0 ? S(-a[i][j]) : a[i][j];
      t_[i][n_ + i] = 1;
      rhs_[i] = sign_[i] < 0 ? S(-b[i]) : b[i];
      basis_[i] = n_ + i;
      rhs_scale_ += Arith<S>::to_double(rhs_[i]);
    }
  }

  LpResult<S> run(const Vec<S>& c, long max_iter) {
    LpResult<S> res;
    Vec<S> cost1(n_ + m_, S(0));
    for (int i = 0; i < m_; ++i) cost1[n_ + i] = 1;
    if (!optimize(cost1, n_ + m_, max_iter)) {
      res.status = LpStatus::IterationLimit;
      return res;
    }
    if (Arith<S>::sign(obj_, tol_ * (1.0 + rhs_scale_)) > 0) {
      res.status = LpStatus::Infeasible;
      res.y.assign(m_, S(0));
      for (int i = 0; i < m_; ++i) {
        S yi = S(1) - red_[n_ + i];
        res.y[i] = sign_[i] < 0 ? S(-yi) : yi;
      }
      return res;
    }
    drive_out_artificials();
    Vec<S> cost2(n_ + m_, S(0));
    for (int j = 0; j < n_; ++j) cost2[j] = c[j];
    const bool done = optimize(cost2, n_, max_iter);
    if (!done) {
      res.status = unbounded_ ? LpStatus::Unbounded : LpStatus::IterationLimit;
      return res;
    }
    res.status = LpStatus::Optimal;
    res.x.assign(n_, S(0));
    res.basis.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) {
        res.x[basis_[i]] = rhs_[i];
        res.basis[i] = basis_[i];
      }
    }
    res.y.assign(m_, S(0));
    for (int i = 0; i < m_; ++i) {
      S yi = -red_[n_ + i];
      res.y[i] = sign_[i] < 0 ? S(-yi) : yi;
    }
    res.objective = 0;
    for (int j = 0; j < n_; ++j) res.objective += c[j] * res.x[j];
    return res;
  }

 private:
  bool negative(const S& v) const { return Arith<S>::sign(v, tol_) < 0; }
  bool positive_pivot(const S& v) const {
    return Arith<S>::sign(v, Arith<S>::exact ? 0.0 : 1e-9) > 0;
  }

  void pivot(int r, int e) {
    const S inv = S(1) / t_[r][e];
    for (auto& v : t_[r]) v *= inv;
    rhs_[r] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const S f = t_[i][e];
      if (Arith<S>::is_zero(f, 0.0)) continue;
      for (int j = 0; j < n_ + m_; ++j) t_[i][j] -= f * t_[r][j];
      rhs_[i] -= f * rhs_[r];
      if constexpr (!Arith<S>::exact) t_[i][e] = 0;
    }
    const S f = red_[e];
    if (!Arith<S>::is_zero(f, 0.0)) {
      for (int j = 0; j < n_ + m_; ++j) red_[j] -= f * t_[r][j];
      obj_ += f * rhs_[r];
    }
    basis_[r] = e;
  }

  /// Minimizes cost over columns [0, allowed); returns false on unboundedness
  /// or iteration limit.
  bool optimize(const Vec<S>& cost, int allowed, long max_iter) {
    red_ = cost;
    obj_ = 0;
    for (int i = 0; i < m_; ++i) {
      const S cb = cost[basis_[i]];
      if (Arith<S>::is_zero(cb, 0.0)) continue;
      for (int j = 0; j < n_ + m_; ++j) red_[j] -= cb * t_[i][j];
      obj_ += cb * rhs_[i];
    }
    unbounded_ = false;
    int degenerate_run = 0;
    for (long it = 0; it < max_iter; ++it) {
      const bool bland = degenerate_run > 50;
      int e = -1;
      S best = 0;
      for (int j = 0; j < allowed; ++j) {
        if (!negative(red_[j])) continue;
        if (bland) {
          e = j;
          break;
        }
        if (e < 0 || red_[j] < best) {
          e = j;
          best = red_[j];
        }
      }
      if (e < 0) return true;
      int r = -1;
      S ratio = 0;
      for (int i = 0; i < m_; ++i) {
        if (!positive_pivot(t_[i][e])) continue;
        const S q = rhs_[i] / t_[i][e];
        if (r < 0 || q < ratio || (q == ratio && basis_[i] < basis_[r])) {
          r = i;
          ratio = q;
        }
      }
      if (r < 0) {
        unbounded_ = true;
        return false;
      }
      degenerate_run = Arith<S>::is_zero(ratio, tol_) ? degenerate_run + 1 : 0;
      pivot(r, e);
    }
    return false;
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int e = -1;
      double mag = Arith<S>::exact ? 0.0 : 1e-9;
      for (int j = 0; j < n_; ++j) {
        const double v = std::abs(Arith<S>::to_double(t_[i][j]));
        if constexpr (Arith<S>::exact) {
          if (!t_[i][j].is_zero()) {
            e = j;
            break;
          }
        } else if (v > mag) {
          mag = v;
          e = j;
        }
      }
      if (e >= 0) pivot(i, e);
    }
  }

  int m_, n_;
  double tol_;
  double rhs_scale_ = 0;
  Mat<S> t_;
  Vec<S> rhs_;
  std::vector<int> sign_;
  std::vector<int> basis_;
  Vec<S> red_;
  S obj_ = 0;
  bool unbounded_ = false;
};

template <class S>
LpResult<S> solve_lp(const Mat<S>& a, const Vec<S>& b, const Vec<S>& c, double tol = 1e-10,
                     long max_iter = 200000) {
  TableauSimplex<S> simplex(a, b, tol);
  return simplex.run(c, max_iter);
}

}  // namespace conekit
