#pragma once

// Finitely described infinite free modules: direct sums of shifts R(-g) of a
// finite-dimensional graded ring, indexed by a finite list of degrees or by a
// subgroup of the grading group.

#include "gradlab/calculus.hpp"

#include <variant>

namespace gradlab {

/// Subgroup of `ambient` generated by finitely many elements.
class Subgroup {
 public:
  Subgroup(FgAbGroup ambient, std::vector<GroupElement> generators);

  static Subgroup kernel_of(const GroupHom& psi);
  static Subgroup whole(const FgAbGroup& g);

  const FgAbGroup& ambient() const { return ambient_; }
  const std::vector<GroupElement>& generators() const { return generators_; }

  bool contains(const GroupElement& x) const;
  bool is_finite() const;
  /// All elements; finite subgroups only.
  std::vector<GroupElement> elements() const;
  /// Integer combinations of the generators with coefficients in [-radius, radius], sorted.
  std::vector<GroupElement> window(std::int64_t radius) const;
  bool same_as(const Subgroup& o) const;

 private:
  FgAbGroup ambient_;
  std::vector<GroupElement> generators_;
  GroupHom to_quotient_;
};

/// ⊕_{i ∈ index} R(-deg(i)), where deg is `degree_map` applied to the index.
/// The generator e_i is 1_R in the summand of i and sits in degree deg(i).
template <class F>
class IntensionalFreeModule {
 public:
  struct FiniteDegrees {
    std::vector<GroupElement> degrees;
  };
  struct SubgroupIndexed {
    Subgroup subgroup;
  };
  using Scheme = std::variant<FiniteDegrees, SubgroupIndexed>;

  IntensionalFreeModule(GradedRing<F> ring, Scheme scheme, GroupHom degree_map)
      : ring_(std::move(ring)), scheme_(std::move(scheme)), degree_map_(std::move(degree_map)) {
    if (!(degree_map_.codomain() == ring_.group()))
      throw GroupMismatch("degree map does not land in the grading group");
    if (const auto* s = std::get_if<SubgroupIndexed>(&scheme_))
      if (!(s->subgroup.ambient() == degree_map_.domain())) throw GroupMismatch("index subgroup lives in another group");
    if (const auto* f = std::get_if<FiniteDegrees>(&scheme_))
      for (auto& d : f->degrees)
        if (!degree_map_.domain().contains(d)) throw GroupMismatch("index degree not in the index group");
  }

  static IntensionalFreeModule finite_degrees(const GradedRing<F>& r, std::vector<GroupElement> degrees) {
    for (auto& d : degrees) d = r.group().element(d.coords);
    return {r, FiniteDegrees{std::move(degrees)}, GroupHom::identity(r.group())};
  }
  static IntensionalFreeModule subgroup_indexed(const GradedRing<F>& r, Subgroup k) {
    return {r, SubgroupIndexed{std::move(k)}, GroupHom::identity(r.group())};
  }

  const GradedRing<F>& ring() const { return ring_; }
  const Scheme& scheme() const { return scheme_; }
  const GroupHom& degree_map() const { return degree_map_; }
  bool is_subgroup_indexed() const { return std::holds_alternative<SubgroupIndexed>(scheme_); }
  const Subgroup& subgroup() const { return std::get<SubgroupIndexed>(scheme_).subgroup; }

  GroupElement degree_of(const GroupElement& index) const { return degree_map_(index); }
  bool contains_index(const GroupElement& i) const {
    if (const auto* f = std::get_if<FiniteDegrees>(&scheme_))
      return std::find(f->degrees.begin(), f->degrees.end(), i) != f->degrees.end();
    return subgroup().contains(i);
  }
  bool has_finite_index() const {
    return !is_subgroup_indexed() || subgroup().is_finite();
  }
  std::vector<GroupElement> indices() const {
    if (const auto* f = std::get_if<FiniteDegrees>(&scheme_)) return f->degrees;
    return subgroup().elements();
  }
  bool ring_is_zero() const { return is_zero_matrix<F>(ring_.one()); }

  /// R(-deg(i)).
  GradedModule<F> summand(const GroupElement& index) const {
    return shift(GradedModule<F>::regular(ring_), ring_.group().neg(degree_of(index)));
  }

  /// The explicit module; finite index sets only.
  GradedModule<F> materialize() const {
    if (!has_finite_index()) throw InfiniteSupport("direct sum over an infinite index subgroup");
    std::vector<GradedModule<F>> parts;
    for (const auto& i : indices()) parts.push_back(summand(i));
    return direct_sum(parts, ring_);
  }

  /// Same index set, ring and degrees carried along `psi`.
  IntensionalFreeModule regraded(const GradedRing<F>& coarse_ring, const GroupHom& psi) const {
    return {coarse_ring, scheme_, psi.after(degree_map_)};
  }

 private:
  GradedRing<F> ring_;
  Scheme scheme_;
  GroupHom degree_map_;
};

}  // namespace gradlab
