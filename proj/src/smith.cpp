#include "gradlab/smith.hpp"

#include <algorithm>
#include <stdexcept>

namespace gradlab {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

IntMatrix checked_product(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in integer product");
  IntMatrix out = IntMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      std::int64_t s = 0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) s = checked_add(s, checked_mul(a(i, k), b(k, j)));
      out(i, j) = s;
    }
  return out;
}

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

Eigen::Index SmithForm::rank() const {
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < std::min(S.rows(), S.cols()); ++i)
    if (S(i, i) != 0) ++r;
  return r;
}

namespace {

// Elementary operations applied to S, mirrored on U (rows) / V (columns) and
// their inverses.
struct Reducer {
  SmithForm f;

  // row_i += k * row_j
  void add_row(Eigen::Index i, Eigen::Index j, std::int64_t k) {
    if (k == 0) return;
    for (Eigen::Index c = 0; c < f.S.cols(); ++c) f.S(i, c) = checked_add(f.S(i, c), checked_mul(k, f.S(j, c)));
    for (Eigen::Index c = 0; c < f.U.cols(); ++c) f.U(i, c) = checked_add(f.U(i, c), checked_mul(k, f.U(j, c)));
    // U_inv gets the inverse operation on columns: col_j -= k * col_i
    for (Eigen::Index r = 0; r < f.U_inv.rows(); ++r)
      f.U_inv(r, j) = checked_add(f.U_inv(r, j), checked_mul(-k, f.U_inv(r, i)));
  }
  // col_i += k * col_j
  void add_col(Eigen::Index i, Eigen::Index j, std::int64_t k) {
    if (k == 0) return;
    for (Eigen::Index r = 0; r < f.S.rows(); ++r) f.S(r, i) = checked_add(f.S(r, i), checked_mul(k, f.S(r, j)));
    for (Eigen::Index r = 0; r < f.V.rows(); ++r) f.V(r, i) = checked_add(f.V(r, i), checked_mul(k, f.V(r, j)));
    // V_inv: row_j -= k * row_i
    for (Eigen::Index c = 0; c < f.V_inv.cols(); ++c)
      f.V_inv(j, c) = checked_add(f.V_inv(j, c), checked_mul(-k, f.V_inv(i, c)));
  }
  void swap_rows(Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    f.S.row(i).swap(f.S.row(j));
    f.U.row(i).swap(f.U.row(j));
    f.U_inv.col(i).swap(f.U_inv.col(j));
  }
  void swap_cols(Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    f.S.col(i).swap(f.S.col(j));
    f.V.col(i).swap(f.V.col(j));
    f.V_inv.row(i).swap(f.V_inv.row(j));
  }
  void negate_row(Eigen::Index i) {
    f.S.row(i) = -f.S.row(i);
    f.U.row(i) = -f.U.row(i);
    f.U_inv.col(i) = -f.U_inv.col(i);
  }
};

std::int64_t abs64(std::int64_t x) {
  if (x == INT64_MIN) throw std::overflow_error("integer overflow");
  return x < 0 ? -x : x;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  const Eigen::Index m = a.rows(), n = a.cols();
  Reducer red;
  red.f.S = a;
  red.f.U = IntMatrix::Identity(m, m);
  red.f.U_inv = IntMatrix::Identity(m, m);
  red.f.V = IntMatrix::Identity(n, n);
  red.f.V_inv = IntMatrix::Identity(n, n);
  IntMatrix& S = red.f.S;

  for (Eigen::Index t = 0; t < std::min(m, n); ++t) {
    while (true) {
      // Pivot: smallest nonzero absolute value in the trailing block.
      Eigen::Index pr = -1, pc = -1;
      std::int64_t best = 0;
      for (Eigen::Index i = t; i < m; ++i)
        for (Eigen::Index j = t; j < n; ++j)
          if (S(i, j) != 0 && (pr < 0 || abs64(S(i, j)) < best)) {
            best = abs64(S(i, j));
            pr = i;
            pc = j;
          }
      if (pr < 0) break;  // trailing block is zero
      red.swap_rows(t, pr);
      red.swap_cols(t, pc);

      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (S(i, t) == 0) continue;
        red.add_row(i, t, -(S(i, t) / S(t, t)));
        if (S(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (S(t, j) == 0) continue;
        red.add_col(j, t, -(S(t, j) / S(t, t)));
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Row and column are clear; enforce divisibility on the rest.
      Eigen::Index bad_row = -1;
      for (Eigen::Index i = t + 1; i < m && bad_row < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (S(i, j) % S(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (bad_row < 0) break;
      red.add_row(t, bad_row, 1);
    }
    if (t < m && t < n && S(t, t) < 0) red.negate_row(t);
  }
  return red.f;
}

}  // namespace gradlab
