#pragma once

// Exact dense linear algebra over the fields in field.hpp. Eigen provides the
// storage and arithmetic expressions; elimination is done here because Eigen's
// decompositions pivot on magnitude, which is meaningless over F_p.

#include "gradlab/field.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace gradlab {

template <class F>
using Mat = Eigen::Matrix<F, Eigen::Dynamic, Eigen::Dynamic>;
template <class F>
using Vec = Eigen::Matrix<F, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

template <class F>
Mat<F> zeros(Index rows, Index cols) {
  return Mat<F>::Constant(rows, cols, F(0));
}

template <class F>
Vec<F> zero_vector(Index n) {
  return Vec<F>::Constant(n, F(0));
}

template <class F>
Mat<F> identity(Index n) {
  Mat<F> m = zeros<F>(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = F(1);
  return m;
}

template <class F, class Derived>
bool is_zero_matrix(const Eigen::MatrixBase<Derived>& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!is_zero(F(m(i, j)))) return false;
  return true;
}

template <class F>
bool equal(const Mat<F>& a, const Mat<F>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

/// Reduced row echelon form together with the pivot columns.
template <class F>
struct Echelon {
  Mat<F> rref;
  std::vector<Index> pivots;
  Index rank() const { return static_cast<Index>(pivots.size()); }
};

template <class F>
Echelon<F> echelon(Mat<F> a) {
  Echelon<F> out;
  Index row = 0;
  for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Index piv = -1;
    for (Index r = row; r < a.rows(); ++r)
      if (!is_zero(a(r, col))) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != row) a.row(piv).swap(a.row(row));
    F inv = F(1) / a(row, col);
    if (inv != F(1))
      for (Index c = col; c < a.cols(); ++c) a(row, c) *= inv;
    for (Index r = 0; r < a.rows(); ++r) {
      if (r == row || is_zero(a(r, col))) continue;
      F factor = a(r, col);
      for (Index c = col; c < a.cols(); ++c) a(r, c) -= factor * a(row, c);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rref = std::move(a);
  return out;
}

template <class F>
Index rank(const Mat<F>& a) {
  return echelon<F>(a).rank();
}

/// Basis of {x : a x = 0}, one column per free variable.
template <class F>
Mat<F> nullspace(const Mat<F>& a) {
  Echelon<F> e = echelon<F>(a);
  const Index n = a.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Index p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  Mat<F> basis = zeros<F>(n, n - e.rank());
  Index k = 0;
  for (Index free = 0; free < n; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    basis(free, k) = F(1);
    for (Index r = 0; r < e.rank(); ++r) basis(e.pivots[static_cast<std::size_t>(r)], k) = -e.rref(r, free);
    ++k;
  }
  return basis;
}

/// Some solution of a x = b, or nullopt when the system is inconsistent.
template <class F>
std::optional<Vec<F>> solve(const Mat<F>& a, const Vec<F>& b) {
  Mat<F> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  Echelon<F> e = echelon<F>(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  Vec<F> x = zero_vector<F>(a.cols());
  for (Index r = 0; r < e.rank(); ++r) x(e.pivots[static_cast<std::size_t>(r)]) = e.rref(r, a.cols());
  return x;
}

/// Columns of `a` forming a basis of its column space (the pivot columns).
template <class F>
Mat<F> column_basis(const Mat<F>& a) {
  Echelon<F> e = echelon<F>(a);
  Mat<F> out(a.rows(), e.rank());
  for (Index k = 0; k < e.rank(); ++k) out.col(k) = a.col(e.pivots[static_cast<std::size_t>(k)]);
  return out;
}

/// Coordinates of v in the basis given by the (independent) columns of b.
template <class F>
std::optional<Vec<F>> coordinates(const Mat<F>& b, const Vec<F>& v) {
  return solve<F>(b, v);
}

template <class F>
bool in_span(const Mat<F>& b, const Vec<F>& v) {
  return coordinates<F>(b, v).has_value();
}

template <class F>
std::optional<Mat<F>> inverse(const Mat<F>& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  const Index n = a.rows();
  Mat<F> aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = identity<F>(n);
  Echelon<F> e = echelon<F>(aug);
  if (e.rank() < n || (n > 0 && e.pivots[static_cast<std::size_t>(n - 1)] != n - 1)) return std::nullopt;
  return Mat<F>(e.rref.rightCols(n));
}

/// Horizontal concatenation; tolerates empty inputs.
template <class F>
Mat<F> hcat(const std::vector<Mat<F>>& blocks, Index rows) {
  Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Mat<F> out(rows, cols);
  Index c = 0;
  for (const auto& b : blocks) {
    if (b.cols() == 0) continue;
    out.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  return out;
}

template <class F>
Vec<F> flatten(const Mat<F>& m) {
  Vec<F> v(m.size());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) v(j * m.rows() + i) = m(i, j);
  return v;
}

}  // namespace gradlab
