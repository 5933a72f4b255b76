#pragma once

// Shared fixture rings and small helpers for the test binaries.

#include "gradlab/calculus.hpp"

#include <initializer_list>

namespace fx {

using namespace gradlab;

template <class F>
Vec<F> vec(std::initializer_list<long long> xs) {
  Vec<F> v(static_cast<Index>(xs.size()));
  Index k = 0;
  for (long long x : xs) v(k++) = F(x);
  return v;
}

template <class F>
Mat<F> mat(std::initializer_list<std::initializer_list<long long>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r ? static_cast<Index>(rows.begin()->size()) : 0;
  Mat<F> m(r, c);
  Index i = 0;
  for (auto row : rows) {
    Index j = 0;
    for (long long x : row) m(i, j++) = F(x);
    ++i;
  }
  return m;
}

inline FgAbGroup Z() { return FgAbGroup::free(1); }
inline FgAbGroup Z2() { return FgAbGroup::cyclic(2); }
inline FgAbGroup Z4() { return FgAbGroup::cyclic(4); }
inline FgAbGroup Z_Z2() { return FgAbGroup(1, {2}); }
inline GroupElement el(const FgAbGroup& g, std::initializer_list<std::int64_t> c) { return g.element(c); }

inline GroupHom hom(const FgAbGroup& g, const FgAbGroup& h, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  IntMatrix m(h.num_coords(), g.num_coords());
  Eigen::Index r = 0;
  for (auto row : rows) {
    Eigen::Index c = 0;
    for (auto v : row) m(r, c++) = v;
    ++r;
  }
  return GroupHom(g, h, m);
}

// The six epimorphisms of the acceptance corpus.
inline GroupHom psi_id_Z() { return GroupHom::identity(Z()); }
inline GroupHom psi_Z_Z2() { return hom(Z(), Z2(), {{1}}); }
inline GroupHom psi_Z2_0() { return GroupHom::to_trivial(Z2()); }
inline GroupHom psi_Z4_Z2() { return hom(Z4(), Z2(), {{1}}); }
inline GroupHom psi_ZZ2_Z() { return hom(Z_Z2(), Z(), {{1, 0}}); }
inline GroupHom psi_Z_0() { return GroupHom::to_trivial(Z()); }

/// K[t]/(t^2) graded by Z/2 with deg t = 1.
template <class F>
GradedRing<F> dual_numbers_z2() {
  return GradedRing<F>::truncated_polynomial(Z2(), el(Z2(), {1}), 2);
}

/// K[Z/2] with its canonical grading.
template <class F>
GradedRing<F> group_algebra_z2() {
  return GradedRing<F>::group_algebra(Z2());
}

template <class F>
GradedRing<F> field_ring(const FgAbGroup& g) {
  return GradedRing<F>::field_in_degree_zero(g);
}

/// Direct sum of shifts R(-g) of the regular module.
template <class F>
GradedModule<F> free_module(const GradedRing<F>& r, const std::vector<GroupElement>& gens) {
  std::vector<GradedModule<F>> parts;
  for (const auto& g : gens) parts.push_back(shift(GradedModule<F>::regular(r), r.group().neg(g)));
  return direct_sum(parts, r);
}

}  // namespace fx
