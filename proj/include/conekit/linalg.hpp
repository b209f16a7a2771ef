#pragma once

#include <optional>

#include "conekit/numeric.hpp"

namespace conekit {

/** Gaussian elimination helpers working for both backends. Floating point
 * uses partial pivoting and treats entries below `tol * scale` as zero, where
 * scale is the largest absolute entry of the input. */
namespace detail {

template <class S>
double matrix_scale(const Mat<S>& a) {
  double s = 0;
  for (const auto& row : a)
    for (const auto& x : row) s = std::max(s, std::abs(Arith<S>::to_double(x)));
  return s;
}

/// Reduces `a` in place to reduced row echelon form; returns pivot columns.
template <class S>
std::vector<int> rref(Mat<S>& a, int ncols, double tol) {
  const double zero = Arith<S>::exact ? 0.0 : tol * std::max(1.0, matrix_scale(a));
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int col = 0; col < ncols && row < a.size(); ++col) {
    std::size_t best = a.size();
    if constexpr (Arith<S>::exact) {
      for (std::size_t r = row; r < a.size(); ++r)
        if (!a[r][col].is_zero()) {
          best = r;
          break;
        }
    } else {
      double mag = zero;
      for (std::size_t r = row; r < a.size(); ++r)
        if (std::abs(a[r][col]) > mag) {
          mag = std::abs(a[r][col]);
          best = r;
        }
    }
    if (best == a.size()) continue;
    std::swap(a[row], a[best]);
    const S inv = S(1) / a[row][col];
    const int width = static_cast<int>(a[row].size());
    for (int c = col; c < width; ++c) a[row][c] *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row) continue;
      const S f = a[r][col];
      if (Arith<S>::is_zero(f, 0.0)) continue;
      for (int c = col; c < width; ++c) a[r][c] -= f * a[row][c];
      if constexpr (!Arith<S>::exact) a[r][col] = 0;
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

template <class S>
int rank(Mat<S> rows, int ncols, double tol = 1e-9) {
  return static_cast<int>(detail::rref(rows, ncols, tol).size());
}

/// A nonzero vector x with rows * x = 0, or nullopt if the kernel is trivial.
template <class S>
std::optional<Vec<S>> kernel_vector(Mat<S> rows, int ncols, double tol = 1e-9) {
  const auto piv = detail::rref(rows, ncols, tol);
  std::vector<bool> is_pivot(ncols, false);
  for (int p : piv) is_pivot[p] = true;
  int free_col = -1;
  for (int c = 0; c < ncols; ++c)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  if (free_col < 0) return std::nullopt;
  Vec<S> x(ncols, S(0));
  x[free_col] = 1;
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -rows[r][free_col];
  return x;
}

/// Solves the square system a x = b; nullopt when a is singular.
template <class S>
std::optional<Vec<S>> solve(const Mat<S>& a, const Vec<S>& b, double tol = 1e-12) {
  const int n = static_cast<int>(a.size());
  Mat<S> aug(n, Vec<S>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
  }
  const auto piv = detail::rref(aug, n, tol);
  if (static_cast<int>(piv.size()) < n) return std::nullopt;
  Vec<S> x(n);
  for (int i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

template <class S>
std::optional<Mat<S>> inverse(const Mat<S>& a, double tol = 1e-12) {
  const int n = static_cast<int>(a.size());
  Mat<S> aug(n, Vec<S>(2 * n, S(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  const auto piv = detail::rref(aug, n, tol);
  if (static_cast<int>(piv.size()) < n) return std::nullopt;
  Mat<S> inv(n, Vec<S>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

template <class S>
Mat<S> transpose(const Mat<S>& a, int ncols) {
  Mat<S> t(ncols, Vec<S>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int j = 0; j < ncols; ++j) t[j][i] = a[i][j];
  return t;
}

}  // namespace conekit
