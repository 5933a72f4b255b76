#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace gradlab {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// U * A * V == S with U, V unimodular and S diagonal, nonnegative, and
/// S(i,i) | S(i+1,i+1). Zeros on the diagonal come last.
struct SmithForm {
  IntMatrix U;
  IntMatrix S;
  IntMatrix V;
  /// Inverses of U and V, maintained alongside so callers never invert.
  IntMatrix U_inv;
  IntMatrix V_inv;

  /// Number of nonzero diagonal entries.
  Eigen::Index rank() const;
};

/// Integer arithmetic helpers that throw std::overflow_error instead of wrapping.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
IntMatrix checked_product(const IntMatrix& a, const IntMatrix& b);

/// Nonnegative residue of a modulo m (m > 0).
std::int64_t mod_floor(std::int64_t a, std::int64_t m);

SmithForm smith_normal_form(const IntMatrix& a);

}  // namespace gradlab
