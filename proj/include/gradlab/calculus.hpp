#pragma once

// Submodules, kernels, images, quotients, direct sums and finite products.

#include "gradlab/graded.hpp"

#include <optional>

namespace gradlab {

/// Homogeneous, action-closed subspace of a module. The basis is canonical:
/// per degree, the reduced row echelon basis of the component, so two
/// submodules are equal iff their bases are.
template <class F>
class GradedSubmodule {
 public:
  /// Span of homogeneous vectors (columns). Throws NonHomogeneousInput for a
  /// non-homogeneous column and InvalidStructure if the span is not closed.
  static GradedSubmodule spanned_by(const GradedModule<F>& parent, const Mat<F>& vectors) {
    GradedSubmodule s(parent, vectors);
    if (!s.is_closed()) throw InvalidStructure("span is not closed under the ring action");
    return s;
  }

  /// Smallest submodule containing the given homogeneous vectors.
  static GradedSubmodule generated_by(const GradedModule<F>& parent, const Mat<F>& generators) {
    GradedSubmodule s(parent, generators);
    while (true) {
      std::vector<Mat<F>> blocks{s.basis_};
      for (Index i = 0; i < parent.ring().dim(); ++i) blocks.push_back(parent.action(i) * s.basis_);
      GradedSubmodule next(parent, hcat<F>(blocks, parent.dim()));
      if (next.dim() == s.dim()) return next;
      s = std::move(next);
    }
  }

  static GradedSubmodule zero(const GradedModule<F>& parent) { return GradedSubmodule(parent, Mat<F>(parent.dim(), 0)); }
  static GradedSubmodule whole(const GradedModule<F>& parent) {
    return GradedSubmodule(parent, identity<F>(parent.dim()));
  }

  const GradedModule<F>& parent() const { return parent_; }
  /// Columns: canonical homogeneous basis vectors in parent coordinates.
  const Mat<F>& basis() const { return basis_; }
  const std::vector<GroupElement>& degrees() const { return degrees_; }
  Index dim() const { return basis_.cols(); }

  bool contains(const Vec<F>& v) const { return in_span<F>(basis_, v); }

  bool is_closed() const {
    for (Index i = 0; i < parent_.ring().dim(); ++i) {
      Mat<F> img = parent_.action(i) * basis_;
      for (Index k = 0; k < img.cols(); ++k)
        if (!contains(img.col(k))) return false;
    }
    return true;
  }

  /// The submodule as a module in its own right, with induced action.
  GradedModule<F> module() const {
    std::vector<BasisElement> basis;
    for (Index k = 0; k < dim(); ++k) basis.push_back({"v" + std::to_string(k), degrees_[static_cast<std::size_t>(k)]});
    std::vector<Mat<F>> action;
    for (Index i = 0; i < parent_.ring().dim(); ++i) {
      Mat<F> img = parent_.action(i) * basis_;
      Mat<F> a(dim(), dim());
      for (Index k = 0; k < dim(); ++k) {
        auto c = coordinates<F>(basis_, img.col(k));
        if (!c) throw InvalidStructure("submodule is not closed under the ring action");
        a.col(k) = *c;
      }
      action.push_back(std::move(a));
    }
    return GradedModule<F>(parent_.ring(), std::move(basis), std::move(action));
  }

  GradedMorphism<F> inclusion() const { return GradedMorphism<F>(module(), parent_, basis_); }

  friend bool operator==(const GradedSubmodule& a, const GradedSubmodule& b) {
    return a.parent_ == b.parent_ && equal<F>(a.basis_, b.basis_);
  }

 private:
  GradedSubmodule(GradedModule<F> parent, const Mat<F>& vectors) : parent_(std::move(parent)) {
    std::map<GroupElement, std::vector<Index>> cols_by_degree;
    for (Index k = 0; k < vectors.cols(); ++k) {
      GroupElement deg;
      if (!parent_.is_homogeneous(vectors.col(k), &deg))
        throw NonHomogeneousInput("vector " + std::to_string(k) + " is not homogeneous");
      if (is_zero_matrix<F>(vectors.col(k))) continue;
      cols_by_degree[deg].push_back(k);
    }
    std::vector<Vec<F>> out;
    for (const auto& [deg, cols] : cols_by_degree) {
      const std::vector<Index> comp = parent_.component(deg);
      Mat<F> local(static_cast<Index>(cols.size()), static_cast<Index>(comp.size()));
      for (std::size_t r = 0; r < cols.size(); ++r)
        for (std::size_t c = 0; c < comp.size(); ++c)
          local(static_cast<Index>(r), static_cast<Index>(c)) = vectors(comp[c], cols[r]);
      Echelon<F> e = echelon<F>(local);
      for (Index r = 0; r < e.rank(); ++r) {
        Vec<F> v = zero_vector<F>(parent_.dim());
        for (std::size_t c = 0; c < comp.size(); ++c) v(comp[c]) = e.rref(r, static_cast<Index>(c));
        out.push_back(std::move(v));
        degrees_.push_back(deg);
      }
    }
    basis_ = Mat<F>(parent_.dim(), static_cast<Index>(out.size()));
    for (std::size_t k = 0; k < out.size(); ++k) basis_.col(static_cast<Index>(k)) = out[k];
  }

  GradedModule<F> parent_;
  Mat<F> basis_;
  std::vector<GroupElement> degrees_;
};

template <class F>
GradedSubmodule<F> kernel_of(const GradedMorphism<F>& u) {
  const auto& s = u.source();
  std::vector<Mat<F>> blocks;
  for (const auto& g : s.support()) {
    const auto comp = s.component(g);
    Mat<F> local(u.matrix().rows(), static_cast<Index>(comp.size()));
    for (std::size_t c = 0; c < comp.size(); ++c) local.col(static_cast<Index>(c)) = u.matrix().col(comp[c]);
    Mat<F> ns = nullspace<F>(local);
    Mat<F> lifted = zeros<F>(s.dim(), ns.cols());
    for (std::size_t c = 0; c < comp.size(); ++c) lifted.row(comp[c]) = ns.row(static_cast<Index>(c));
    blocks.push_back(std::move(lifted));
  }
  return GradedSubmodule<F>::spanned_by(s, hcat<F>(blocks, s.dim()));
}

template <class F>
GradedSubmodule<F> image_of(const GradedMorphism<F>& u) {
  return GradedSubmodule<F>::spanned_by(u.target(), u.matrix());
}

template <class F>
struct QuotientModule {
  GradedModule<F> module;
  GradedMorphism<F> projection;
  /// Linear (not module) section: quotient basis -> parent basis vectors.
  Mat<F> lift;
};

template <class F>
QuotientModule<F> quotient_by(const GradedSubmodule<F>& sub) {
  const auto& m = sub.parent();
  // Each degree: canonical basis rows are in RREF over the component
  // coordinates; non-pivot coordinates index the quotient basis.
  std::vector<Index> pivot_of(static_cast<std::size_t>(m.dim()), -1);  // parent coord -> sub basis column
  for (Index k = 0; k < sub.dim(); ++k) {
    for (Index j = 0; j < m.dim(); ++j)
      if (!is_zero(sub.basis()(j, k))) {
        pivot_of[static_cast<std::size_t>(j)] = k;
        break;
      }
  }
  std::vector<Index> kept;
  for (Index j = 0; j < m.dim(); ++j)
    if (pivot_of[static_cast<std::size_t>(j)] < 0) kept.push_back(j);
  const Index qd = static_cast<Index>(kept.size());
  // Projection: reduce by the echelon rows, then read kept coordinates.
  Mat<F> proj = zeros<F>(qd, m.dim());
  for (Index j = 0; j < m.dim(); ++j) {
    Vec<F> v = zero_vector<F>(m.dim());
    v(j) = F(1);
    for (Index p = 0; p < m.dim(); ++p) {
      const Index k = pivot_of[static_cast<std::size_t>(p)];
      if (k >= 0 && !is_zero(v(p))) v -= v(p) * sub.basis().col(k);
    }
    for (Index q = 0; q < qd; ++q) proj(q, j) = v(kept[static_cast<std::size_t>(q)]);
  }
  Mat<F> lift = zeros<F>(m.dim(), qd);
  for (Index q = 0; q < qd; ++q) lift(kept[static_cast<std::size_t>(q)], q) = F(1);
  std::vector<BasisElement> basis;
  for (Index j : kept) basis.push_back(m.basis()[static_cast<std::size_t>(j)]);
  std::vector<Mat<F>> action;
  for (Index i = 0; i < m.ring().dim(); ++i) action.push_back(proj * m.action(i) * lift);
  GradedModule<F> q(m.ring(), std::move(basis), std::move(action));
  return {q, GradedMorphism<F>(m, q, proj), lift};
}

// ============================================================ sums/products

namespace detail {

template <class F>
void require_same_ring(const std::vector<GradedModule<F>>& family) {
  for (std::size_t k = 1; k < family.size(); ++k)
    if (!(family[k].ring() == family[0].ring())) throw RingMismatch("family members live over different rings");
}

}  // namespace detail

/// Direct sum with summands laid out consecutively. An empty family needs the
/// ring explicitly.
template <class F>
GradedModule<F> direct_sum(const std::vector<GradedModule<F>>& family, const GradedRing<F>& ring) {
  detail::require_same_ring(family);
  if (!family.empty() && !(family[0].ring() == ring)) throw RingMismatch("direct_sum ring mismatch");
  Index n = 0;
  for (const auto& m : family) n += m.dim();
  std::vector<BasisElement> basis;
  std::vector<Mat<F>> action(static_cast<std::size_t>(ring.dim()), zeros<F>(n, n));
  Index off = 0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& m = family[k];
    for (const auto& b : m.basis()) basis.push_back({"[" + std::to_string(k) + "]" + b.name, b.degree});
    for (Index i = 0; i < ring.dim(); ++i)
      action[static_cast<std::size_t>(i)].block(off, off, m.dim(), m.dim()) = m.action(i);
    off += m.dim();
  }
  return GradedModule<F>(ring, std::move(basis), std::move(action));
}

template <class F>
GradedModule<F> direct_sum(const std::vector<GradedModule<F>>& family) {
  if (family.empty()) throw InvalidStructure("empty family: pass the ring explicitly");
  return direct_sum(family, family.front().ring());
}

template <class F>
GradedMorphism<F> sum_injection(const std::vector<GradedModule<F>>& family, const GradedModule<F>& sum, std::size_t k) {
  Index off = 0;
  for (std::size_t j = 0; j < k; ++j) off += family[j].dim();
  Mat<F> m = zeros<F>(sum.dim(), family[k].dim());
  m.block(off, 0, family[k].dim(), family[k].dim()) = identity<F>(family[k].dim());
  return GradedMorphism<F>(family[k], sum, m);
}

template <class F>
GradedMorphism<F> sum_projection(const std::vector<GradedModule<F>>& family, const GradedModule<F>& sum, std::size_t k) {
  Index off = 0;
  for (std::size_t j = 0; j < k; ++j) off += family[j].dim();
  Mat<F> m = zeros<F>(family[k].dim(), sum.dim());
  m.block(0, off, family[k].dim(), family[k].dim()) = identity<F>(family[k].dim());
  return GradedMorphism<F>(sum, family[k], m);
}

/// Degreewise product: component g is the product of the components g of the
/// family, laid out degree by degree. For a finite family this is isomorphic
/// to the direct sum and `to_sum` is that isomorphism.
template <class F>
struct FiniteProduct {
  GradedModule<F> product;
  GradedModule<F> sum;
  GradedMorphism<F> to_sum;
};

template <class F>
FiniteProduct<F> finite_product(const std::vector<GradedModule<F>>& family, const GradedRing<F>& ring) {
  GradedModule<F> sum = direct_sum(family, ring);
  // Sum index of (family k, basis j).
  std::vector<Index> offset(family.size() + 1, 0);
  for (std::size_t k = 0; k < family.size(); ++k) offset[k + 1] = offset[k] + family[k].dim();
  std::vector<GroupElement> degrees;
  for (const auto& m : family)
    for (const auto& g : m.support()) degrees.push_back(g);
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  std::vector<Index> order;  // product position -> sum index
  for (const auto& g : degrees)
    for (std::size_t k = 0; k < family.size(); ++k)
      for (Index j : family[k].component(g)) order.push_back(offset[k] + j);
  const Index n = sum.dim();
  Mat<F> perm = zeros<F>(n, n);  // product -> sum
  std::vector<BasisElement> basis;
  for (Index p = 0; p < n; ++p) {
    perm(order[static_cast<std::size_t>(p)], p) = F(1);
    basis.push_back(sum.basis()[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])]);
  }
  std::vector<Mat<F>> action;
  for (Index i = 0; i < ring.dim(); ++i) action.push_back(perm.transpose() * sum.action(i) * perm);
  GradedModule<F> prod(ring, std::move(basis), std::move(action));
  return {prod, sum, GradedMorphism<F>(prod, sum, perm)};
}

/// v ∘ u
template <class F>
GradedMorphism<F> compose(const GradedMorphism<F>& v, const GradedMorphism<F>& u) {
  if (!(u.target() == v.source())) throw InvalidStructure("compose: target of u is not the source of v");
  return GradedMorphism<F>(u.source(), v.target(), v.matrix() * u.matrix());
}

}  // namespace gradlab
