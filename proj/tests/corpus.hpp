#pragma once

// Seeded random corpus: quotients of free modules over small fixture rings,
// one batch per epimorphism psi of the acceptance list.

#include "fixtures.hpp"

#include "gradlab/coarsen.hpp"

#include <random>
#include <string>

namespace corpus {

using namespace gradlab;

struct PsiCase {
  std::string name;
  GroupHom psi;
};

inline std::vector<PsiCase> psi_cases() {
  return {{"id Z", fx::psi_id_Z()},          {"Z -> Z/2", fx::psi_Z_Z2()},   {"Z/2 -> 0", fx::psi_Z2_0()},
          {"Z/4 -> Z/2", fx::psi_Z4_Z2()}, {"Z+Z/2 -> Z", fx::psi_ZZ2_Z()}, {"Z -> 0", fx::psi_Z_0()}};
}

/// Degrees generators are drawn from.
inline std::vector<GroupElement> degree_pool(const FgAbGroup& g) {
  if (g.is_finite()) return g.elements();
  std::vector<GroupElement> out;
  if (g.num_coords() == 1) {
    for (std::int64_t d : {-1, 0, 1, 2}) out.push_back(g.element({d}));
  } else {
    for (std::int64_t d : {-1, 0, 1})
      for (std::int64_t e : {0, 1}) out.push_back(g.element({d, e}));
  }
  return out;
}

template <class F>
std::vector<GradedRing<F>> rings_for(const FgAbGroup& g) {
  std::vector<GradedRing<F>> out{GradedRing<F>::field_in_degree_zero(g)};
  std::vector<std::int64_t> t(static_cast<std::size_t>(g.num_coords()), 0);
  t[0] = 1;
  out.push_back(GradedRing<F>::truncated_polynomial(g, g.element(t), 2));
  if (g.num_coords() == 2) out.push_back(GradedRing<F>::truncated_polynomial(g, g.element({0, 1}), 2));
  if (g.is_finite()) out.push_back(GradedRing<F>::group_algebra(g));
  return out;
}

template <class F>
struct Instance {
  std::string label;
  GroupHom psi;
  GradedRing<F> ring;
  GradedModule<F> m, n, p;
  GradedMorphism<F> u;  // m -> n
  GradedMorphism<F> v;  // n -> p
};

template <class F>
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  F scalar() {
    if constexpr (FieldTraits<F>::is_finite) {
      return F(static_cast<long long>(rng_() % FieldTraits<F>::cardinality));
    } else {
      return F(static_cast<long long>(rng_() % 5) - 2);
    }
  }

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  /// A random quotient of a free module; dim <= max_dim and |supp| <= 4.
  GradedModule<F> module(const GradedRing<F>& r, Index max_dim = 6) {
    const auto pool = degree_pool(r.group());
    for (;;) {
      const std::size_t gens = 1 + pick(3);
      std::vector<GroupElement> degs;
      for (std::size_t k = 0; k < gens; ++k) degs.push_back(pool[pick(pool.size())]);
      GradedModule<F> free = fx::free_module(r, degs);
      if (free.dim() > max_dim + 2) continue;
      const std::size_t rels = pick(3);
      Mat<F> gens_of_sub = zeros<F>(free.dim(), static_cast<Index>(rels));
      const auto supp = free.support();
      for (std::size_t k = 0; k < rels; ++k) {
        for (Index j : free.component(supp[pick(supp.size())])) gens_of_sub(j, static_cast<Index>(k)) = scalar();
      }
      auto q = quotient_by(GradedSubmodule<F>::generated_by(free, gens_of_sub)).module;
      if (q.dim() == 0 || q.dim() > max_dim || q.support().size() > 4) continue;
      return q;
    }
  }

  GradedMorphism<F> morphism(const GradedModule<F>& a, const GradedModule<F>& b) {
    HomSpace<F> h = hom_space(a, b);
    Vec<F> c(h.dim());
    for (Index k = 0; k < h.dim(); ++k) c(k) = scalar();
    return GradedMorphism<F>(a, b, h.dim() ? h.combine(c) : zeros<F>(b.dim(), a.dim()));
  }

  std::vector<Instance<F>> instances(int per_psi) {
    std::vector<Instance<F>> out;
    for (const auto& pc : psi_cases()) {
      const auto rings = rings_for<F>(pc.psi.domain());
      for (int k = 0; k < per_psi; ++k) {
        const GradedRing<F>& r = rings[static_cast<std::size_t>(k) % rings.size()];
        GradedModule<F> m = module(r), n = module(r), p = module(r);
        GradedMorphism<F> u = morphism(m, n), v = morphism(n, p);
        out.push_back({FieldTraits<F>::name() + " " + pc.name + " #" + std::to_string(k), pc.psi, r, m, n, p, u, v});
      }
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace corpus
