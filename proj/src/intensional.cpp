#include "gradlab/intensional.hpp"

#include <set>

namespace gradlab {

namespace {

GroupHom quotient_map(const FgAbGroup& g, std::vector<GroupElement>& gens) {
  for (auto& x : gens) x = g.element(x.coords);
  return quotient(g, gens).projection;
}

}  // namespace

Subgroup::Subgroup(FgAbGroup ambient, std::vector<GroupElement> generators)
    : ambient_(std::move(ambient)),
      generators_(std::move(generators)),
      to_quotient_(quotient_map(ambient_, generators_)) {}

Subgroup Subgroup::kernel_of(const GroupHom& psi) {
  KernelData k = analyze_epimorphism(psi).kernel;
  std::vector<GroupElement> gens;
  for (int i = 0; i < k.kernel.num_coords(); ++i) gens.push_back(k.embedding(k.kernel.generator(i)));
  return Subgroup(psi.domain(), std::move(gens));
}

Subgroup Subgroup::whole(const FgAbGroup& g) {
  std::vector<GroupElement> gens;
  for (int i = 0; i < g.num_coords(); ++i) gens.push_back(g.generator(i));
  return Subgroup(g, std::move(gens));
}

bool Subgroup::contains(const GroupElement& x) const {
  if (!ambient_.contains(x)) return false;
  return to_quotient_(ambient_.element(x.coords)) == to_quotient_.codomain().zero();
}

bool Subgroup::is_finite() const {
  for (const auto& g : generators_)
    for (int i = 0; i < ambient_.rank(); ++i)
      if (g.coords[static_cast<std::size_t>(i)] != 0) return false;
  return true;
}

std::vector<GroupElement> Subgroup::elements() const {
  if (!is_finite()) throw InfiniteSupport("subgroup is infinite");
  std::vector<GroupElement> out;
  for (const auto& x : ambient_.elements())
    if (contains(x)) out.push_back(x);
  return out;
}

std::vector<GroupElement> Subgroup::window(std::int64_t radius) const {
  std::set<GroupElement> acc{ambient_.zero()};
  for (const auto& g : generators_) {
    std::set<GroupElement> next;
    for (const auto& x : acc)
      for (std::int64_t c = -radius; c <= radius; ++c) next.insert(ambient_.add(x, ambient_.scale(c, g)));
    acc = std::move(next);
  }
  return {acc.begin(), acc.end()};
}

bool Subgroup::same_as(const Subgroup& o) const {
  if (!(ambient_ == o.ambient_)) return false;
  for (const auto& g : o.generators_)
    if (!contains(g)) return false;
  for (const auto& g : generators_)
    if (!o.contains(g)) return false;
  return true;
}

}  // namespace gradlab
