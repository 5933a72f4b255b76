#include "gradlab/coarsen.hpp"

namespace gradlab {

CoarseningContext::CoarseningContext(GroupHom psi) : psi_(std::move(psi)), kernel_(analyze_epimorphism(psi_).kernel) {
  if (!analyze_epimorphism(psi_).is_epi) throw NotEpimorphism("psi is not surjective");
  if (kernel_.is_finite() && psi_.codomain().is_finite())
    for (const auto& h : psi_.codomain().elements()) fibers_[h] = gradlab::fiber(psi_, h);
}

std::int64_t CoarseningContext::kernel_order() const {
  if (!kernel_.order) throw InfiniteKernel("kernel of psi is infinite");
  return *kernel_.order;
}

std::vector<GroupElement> CoarseningContext::fiber(const GroupElement& h) const {
  auto it = fibers_.find(coarse_group().element(h.coords));
  if (it != fibers_.end()) return it->second;
  return gradlab::fiber(psi_, h);
}

GroupElement CoarseningContext::lift(const GroupElement& h) const {
  auto g = preimage(psi_, h);
  if (!g) throw NotEpimorphism("degree has no preimage");
  return *g;
}

std::vector<GroupElement> CoarseningContext::preimage_of(const std::vector<GroupElement>& degrees) const {
  std::vector<GroupElement> out;
  for (const auto& h : degrees)
    for (auto& g : fiber(h)) out.push_back(std::move(g));
  return detail::sorted_unique(std::move(out));
}

}  // namespace gradlab
