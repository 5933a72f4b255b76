#pragma once

// Coarsening and refinement along an epimorphism psi: G -> H, the canonical
// transformations between them, the two adjunctions, and the comparison of
// coarsening with products.
//
// A refined module N^[psi] has basis cells (d, j) with d in G and j a basis
// element of N of degree psi(d). Cells are ordered by j, then by d. When the
// kernel of psi is infinite only a finite window of G-degrees is ever built.

#include "gradlab/calculus.hpp"
#include "gradlab/intensional.hpp"

#include <map>
#include <optional>

namespace gradlab {

class CoarseningContext {
 public:
  /// Throws NotEpimorphism.
  explicit CoarseningContext(GroupHom psi);

  const GroupHom& psi() const { return psi_; }
  const FgAbGroup& fine_group() const { return psi_.domain(); }
  const FgAbGroup& coarse_group() const { return psi_.codomain(); }
  const KernelData& kernel() const { return kernel_; }
  bool kernel_finite() const { return kernel_.is_finite(); }
  /// Throws InfiniteKernel.
  std::int64_t kernel_order() const;
  GroupElement operator()(const GroupElement& g) const { return psi_(g); }

  /// psi^{-1}(h), lexicographic. Throws InfiniteKernel.
  std::vector<GroupElement> fiber(const GroupElement& h) const;
  /// Some element of psi^{-1}(h).
  GroupElement lift(const GroupElement& h) const;
  /// Union of the fibers over `degrees`, sorted. Throws InfiniteKernel.
  std::vector<GroupElement> preimage_of(const std::vector<GroupElement>& degrees) const;

 private:
  GroupHom psi_;
  KernelData kernel_;
  std::map<GroupElement, std::vector<GroupElement>> fibers_;
};

namespace detail {

inline std::vector<GroupElement> sorted_unique(std::vector<GroupElement> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline void require_group(const FgAbGroup& have, const FgAbGroup& want, const char* what) {
  if (!(have == want)) throw GroupMismatch(std::string(what) + ": grading group " + have.to_string() + " != " + want.to_string());
}

}  // namespace detail

// ================================================================ coarsening

template <class F>
GradedRing<F> coarsen(const GradedRing<F>& r, const CoarseningContext& ctx) {
  detail::require_group(r.group(), ctx.fine_group(), "coarsen");
  std::vector<BasisElement> basis = r.basis();
  for (auto& b : basis) b.degree = ctx(b.degree);
  std::vector<Mat<F>> mul;
  for (Index i = 0; i < r.dim(); ++i) mul.push_back(r.left_multiplication(i));
  return GradedRing<F>(ctx.coarse_group(), std::move(basis), std::move(mul), r.one());
}

template <class F>
GradedModule<F> coarsen(const GradedModule<F>& m, const CoarseningContext& ctx, const GradedRing<F>& coarse_ring) {
  detail::require_group(m.group(), ctx.fine_group(), "coarsen");
  std::vector<BasisElement> basis = m.basis();
  for (auto& b : basis) b.degree = ctx(b.degree);
  return GradedModule<F>(coarse_ring, std::move(basis), m.actions());
}

template <class F>
GradedModule<F> coarsen(const GradedModule<F>& m, const CoarseningContext& ctx) {
  return coarsen(m, ctx, coarsen(m.ring(), ctx));
}

template <class F>
GradedMorphism<F> coarsen(const GradedMorphism<F>& u, const CoarseningContext& ctx) {
  const GradedRing<F> cr = coarsen(u.source().ring(), ctx);
  return GradedMorphism<F>(coarsen(u.source(), ctx, cr), coarsen(u.target(), ctx, cr), u.matrix());
}

// ================================================================ refinement

struct RefinedCell {
  GroupElement degree;
  Index base;
};

/// Basis cells of a refinement restricted to a window, with reverse lookup.
class RefinedLayout {
 public:
  RefinedLayout() = default;
  RefinedLayout(const std::vector<GroupElement>& base_degrees, const CoarseningContext& ctx,
                const std::vector<GroupElement>& window) {
    std::map<GroupElement, std::vector<GroupElement>> by_coarse;
    for (const auto& d : window) by_coarse[ctx(d)].push_back(d);
    for (Index j = 0; j < static_cast<Index>(base_degrees.size()); ++j) {
      auto it = by_coarse.find(base_degrees[static_cast<std::size_t>(j)]);
      if (it == by_coarse.end()) continue;
      for (const auto& d : it->second) {
        index_[{d, j}] = static_cast<Index>(cells_.size());
        cells_.push_back({d, j});
      }
    }
  }

  const std::vector<RefinedCell>& cells() const { return cells_; }
  Index size() const { return static_cast<Index>(cells_.size()); }
  /// -1 when (d, j) is outside the window.
  Index index_of(const GroupElement& d, Index j) const {
    auto it = index_.find({d, j});
    return it == index_.end() ? -1 : it->second;
  }

  /// Matrix on cells of an operator of G-degree g whose H-level matrix is `a`:
  /// (d, j) -> sum_k a(k, j) (g + d, k). Terms leaving the window are dropped.
  template <class F>
  Mat<F> lift(const Mat<F>& a, const GroupElement& g, const FgAbGroup& grp) const {
    Mat<F> out = zeros<F>(size(), size());
    for (Index c = 0; c < size(); ++c) {
      const auto& cell = cells_[static_cast<std::size_t>(c)];
      const GroupElement d = grp.add(g, cell.degree);
      for (Index k = 0; k < a.rows(); ++k) {
        if (is_zero(a(k, cell.base))) continue;
        const Index r = index_of(d, k);
        if (r >= 0) out(r, c) = a(k, cell.base);
      }
    }
    return out;
  }

 private:
  std::vector<RefinedCell> cells_;
  std::map<std::pair<GroupElement, Index>, Index> index_;
};

template <class F>
struct Refinement {
  GradedModule<F> module;
  RefinedLayout layout;
  std::vector<GroupElement> window;
};

/// Window covering all of supp N^[psi]; finite kernels only.
template <class F>
std::vector<GroupElement> full_window(const GradedModule<F>& n, const CoarseningContext& ctx) {
  if (!ctx.kernel_finite()) throw InfiniteSupport("refinement along psi with infinite kernel needs a finite window");
  return ctx.preimage_of(n.support());
}

/// N^[psi] on `window` for an H-graded module N over R_[psi], as a G-graded
/// R-module. Ring elements acting out of the window are truncated, so the
/// result is an honest module only when the window is closed under the
/// action (always the case for full windows).
template <class F>
Refinement<F> refine(const GradedModule<F>& n, const GradedRing<F>& r, const CoarseningContext& ctx,
                     std::vector<GroupElement> window) {
  detail::require_group(r.group(), ctx.fine_group(), "refine");
  detail::require_group(n.group(), ctx.coarse_group(), "refine");
  if (!(coarsen(r, ctx) == n.ring())) throw RingMismatch("refine: module is not over the coarsened ring");
  for (auto& d : window) d = ctx.fine_group().element(d.coords);
  window = detail::sorted_unique(std::move(window));
  std::vector<GroupElement> base_degrees;
  for (const auto& b : n.basis()) base_degrees.push_back(b.degree);
  RefinedLayout layout(base_degrees, ctx, window);
  std::vector<BasisElement> basis;
  for (const auto& c : layout.cells())
    basis.push_back({n.basis()[static_cast<std::size_t>(c.base)].name + "@" + to_string(c.degree), c.degree});
  std::vector<Mat<F>> action;
  for (Index i = 0; i < r.dim(); ++i) action.push_back(layout.lift<F>(n.action(i), r.degree(i), ctx.fine_group()));
  return {GradedModule<F>(r, std::move(basis), std::move(action)), std::move(layout), std::move(window)};
}

template <class F>
Refinement<F> refine(const GradedModule<F>& n, const GradedRing<F>& r, const CoarseningContext& ctx) {
  return refine(n, r, ctx, full_window(n, ctx));
}

/// v^[psi] between refinements on a common window.
template <class F>
GradedMorphism<F> refine(const GradedMorphism<F>& v, const GradedRing<F>& r, const CoarseningContext& ctx,
                         const std::vector<GroupElement>& window) {
  Refinement<F> s = refine(v.source(), r, ctx, window);
  Refinement<F> t = refine(v.target(), r, ctx, window);
  Mat<F> m = zeros<F>(t.layout.size(), s.layout.size());
  for (Index c = 0; c < s.layout.size(); ++c) {
    const auto& cell = s.layout.cells()[static_cast<std::size_t>(c)];
    for (Index k = 0; k < v.target().dim(); ++k) {
      if (is_zero(v.matrix()(k, cell.base))) continue;
      const Index row = t.layout.index_of(cell.degree, k);
      if (row >= 0) m(row, c) = v.matrix()(k, cell.base);
    }
  }
  return GradedMorphism<F>(s.module, t.module, m);
}

/// Refinement that is never materialized as a whole: answers component
/// queries and builds finite windows on demand.
template <class F>
class LazyRefinedModule {
 public:
  LazyRefinedModule(GradedModule<F> base, GradedRing<F> ring, const CoarseningContext& ctx)
      : base_(std::move(base)), ring_(std::move(ring)), ctx_(ctx) {
    detail::require_group(base_.group(), ctx.coarse_group(), "refine");
    if (!(coarsen(ring_, ctx) == base_.ring())) throw RingMismatch("refine: module is not over the coarsened ring");
  }

  const GradedModule<F>& base() const { return base_; }
  /// Base basis elements spanning the component of degree d.
  std::vector<Index> component(const GroupElement& d) const { return base_.component(ctx_(d)); }
  bool has_finite_support() const { return ctx_.kernel_finite() || base_.dim() == 0; }

  Refinement<F> materialize(const std::vector<GroupElement>& window) const { return refine(base_, ring_, ctx_, window); }
  /// Throws InfiniteSupport when the kernel is infinite.
  Refinement<F> materialize() const {
    if (!has_finite_support()) throw InfiniteSupport("refinement has infinite support; give a window");
    return base_.dim() == 0 ? refine(base_, ring_, ctx_, {}) : refine(base_, ring_, ctx_);
  }

 private:
  GradedModule<F> base_;
  GradedRing<F> ring_;
  const CoarseningContext& ctx_;
};

template <class F>
struct RingRefinement {
  GradedRing<F> ring;
  RefinedLayout layout;
};

/// S^[psi] for an H-graded ring S; (g, i)(g', j) = sum_k c_ij^k (g + g', k).
template <class F>
RingRefinement<F> refine(const GradedRing<F>& s, const CoarseningContext& ctx) {
  detail::require_group(s.group(), ctx.coarse_group(), "refine");
  if (!ctx.kernel_finite()) throw InfiniteSupport("ring refinement along psi with infinite kernel");
  std::vector<GroupElement> degrees;
  for (const auto& b : s.basis()) degrees.push_back(b.degree);
  RefinedLayout layout(degrees, ctx, ctx.preimage_of(s.support()));
  std::vector<BasisElement> basis;
  std::vector<Mat<F>> mul;
  for (const auto& c : layout.cells()) {
    basis.push_back({s.basis()[static_cast<std::size_t>(c.base)].name + "@" + to_string(c.degree), c.degree});
    mul.push_back(layout.lift<F>(s.left_multiplication(c.base), c.degree, ctx.fine_group()));
  }
  Vec<F> one = zero_vector<F>(layout.size());
  for (Index k = 0; k < s.dim(); ++k)
    if (!is_zero(s.one()(k))) one(layout.index_of(ctx.fine_group().zero(), k)) = s.one()(k);
  return {GradedRing<F>(ctx.fine_group(), std::move(basis), std::move(mul), std::move(one)), std::move(layout)};
}

// ============================================== canonical transformations

namespace detail {

// e_b -> (deg b, b)
template <class F>
Mat<F> alpha_matrix(const std::vector<BasisElement>& basis, const RefinedLayout& l) {
  Mat<F> m = zeros<F>(l.size(), static_cast<Index>(basis.size()));
  for (Index b = 0; b < static_cast<Index>(basis.size()); ++b) {
    const Index r = l.index_of(basis[static_cast<std::size_t>(b)].degree, b);
    if (r < 0) throw InvalidStructure("window does not contain the support");
    m(r, b) = F(1);
  }
  return m;
}

// (d, j) -> e_j if deg j == d, else 0
template <class F>
Mat<F> delta_matrix(const std::vector<BasisElement>& basis, const RefinedLayout& l) {
  Mat<F> m = zeros<F>(static_cast<Index>(basis.size()), l.size());
  for (Index c = 0; c < l.size(); ++c) {
    const auto& cell = l.cells()[static_cast<std::size_t>(c)];
    if (basis[static_cast<std::size_t>(cell.base)].degree == cell.degree) m(cell.base, c) = F(1);
  }
  return m;
}

// (d, j) -> e_j
template <class F>
Mat<F> beta_matrix(Index base_dim, const RefinedLayout& l) {
  Mat<F> m = zeros<F>(base_dim, l.size());
  for (Index c = 0; c < l.size(); ++c) m(l.cells()[static_cast<std::size_t>(c)].base, c) = F(1);
  return m;
}

// e_j -> sum over the fiber of (d, j)
template <class F>
Mat<F> gamma_matrix(Index base_dim, const RefinedLayout& l) {
  return beta_matrix<F>(base_dim, l).transpose();
}

template <class F>
void require_rank(const Mat<F>& m, Index want, const char* what) {
  if (rank<F>(m) != want) throw SoundnessFailure(std::string(what) + " failed its rank check");
}

}  // namespace detail

/// Default window for alpha'/delta': everything when the kernel is finite,
/// else supp M.
template <class F>
std::vector<GroupElement> unit_window(const GradedModule<F>& m, const CoarseningContext& ctx) {
  if (!ctx.kernel_finite()) return m.support();
  std::vector<GroupElement> coarse;
  for (const auto& g : m.support()) coarse.push_back(ctx(g));
  return ctx.preimage_of(detail::sorted_unique(std::move(coarse)));
}

/// alpha'(M): M -> (M_[psi])^[psi], a monomorphism.
template <class F>
GradedMorphism<F> alpha_prime(const GradedModule<F>& m, const CoarseningContext& ctx,
                              std::optional<std::vector<GroupElement>> window = {}) {
  Refinement<F> t = refine(coarsen(m, ctx), m.ring(), ctx, window ? *window : unit_window(m, ctx));
  Mat<F> a = detail::alpha_matrix<F>(m.basis(), t.layout);
  detail::require_rank<F>(a, m.dim(), "alpha'");
  return GradedMorphism<F>(m, t.module, std::move(a));
}

/// delta'(M): (M_[psi])^[psi] -> M, an epimorphism.
template <class F>
GradedMorphism<F> delta_prime(const GradedModule<F>& m, const CoarseningContext& ctx,
                              std::optional<std::vector<GroupElement>> window = {}) {
  Refinement<F> s = refine(coarsen(m, ctx), m.ring(), ctx, window ? *window : unit_window(m, ctx));
  Mat<F> d = detail::delta_matrix<F>(m.basis(), s.layout);
  detail::require_rank<F>(d, m.dim(), "delta'");
  return GradedMorphism<F>(s.module, m, std::move(d));
}

/// Default window for beta': everything when the kernel is finite, else one
/// lift of each degree of supp N.
template <class F>
std::vector<GroupElement> counit_window(const GradedModule<F>& n, const CoarseningContext& ctx) {
  if (ctx.kernel_finite()) return full_window(n, ctx);
  std::vector<GroupElement> w;
  for (const auto& h : n.support()) w.push_back(ctx.lift(h));
  return w;
}

/// beta'(N): (N^[psi])_[psi] -> N for N over R_[psi].
template <class F>
GradedMorphism<F> beta_prime(const GradedModule<F>& n, const GradedRing<F>& r, const CoarseningContext& ctx,
                             std::optional<std::vector<GroupElement>> window = {}) {
  Refinement<F> s = refine(n, r, ctx, window ? *window : counit_window(n, ctx));
  GradedModule<F> src = coarsen(s.module, ctx, n.ring());
  Mat<F> b = detail::beta_matrix<F>(n.dim(), s.layout);
  if (!window) detail::require_rank<F>(b, n.dim(), "beta'");
  return GradedMorphism<F>(src, n, std::move(b));
}

/// gamma'(N): N -> (N^[psi])_[psi], a monomorphism. Throws InfiniteKernel.
template <class F>
GradedMorphism<F> gamma_prime(const GradedModule<F>& n, const GradedRing<F>& r, const CoarseningContext& ctx) {
  if (!ctx.kernel_finite()) throw InfiniteKernel("gamma' needs a finite kernel");
  Refinement<F> t = refine(n, r, ctx, full_window(n, ctx));
  Mat<F> g = detail::gamma_matrix<F>(n.dim(), t.layout);
  detail::require_rank<F>(g, n.dim(), "gamma'");
  return GradedMorphism<F>(n, coarsen(t.module, ctx, n.ring()), std::move(g));
}

/// Additive degree-preserving map between graded rings; whether it respects
/// multiplication and unit is reported, not assumed.
template <class F>
struct RingMap {
  GradedRing<F> source;
  GradedRing<F> target;
  Mat<F> matrix;

  bool is_multiplicative() const {
    for (Index i = 0; i < source.dim(); ++i)
      for (Index j = 0; j < source.dim(); ++j)
        if (!equal<F>(Mat<F>(matrix * source.product(i, j)),
                      Mat<F>(target.multiply(matrix.col(i), matrix.col(j)))))
          return false;
    return true;
  }
  bool is_unital() const { return equal<F>(Mat<F>(matrix * source.one()), Mat<F>(target.one())); }
  bool is_ring_morphism() const { return is_multiplicative() && is_unital(); }
};

/// alpha(R): R -> (R_[psi])^[psi]. Finite kernels only.
template <class F>
RingMap<F> alpha(const GradedRing<F>& r, const CoarseningContext& ctx) {
  RingRefinement<F> t = refine(coarsen(r, ctx), ctx);
  return {r, t.ring, detail::alpha_matrix<F>(r.basis(), t.layout)};
}

/// delta(R): (R_[psi])^[psi] -> R. Finite kernels only.
template <class F>
RingMap<F> delta(const GradedRing<F>& r, const CoarseningContext& ctx) {
  RingRefinement<F> s = refine(coarsen(r, ctx), ctx);
  return {s.ring, r, detail::delta_matrix<F>(r.basis(), s.layout)};
}

/// beta(S): (S^[psi])_[psi] -> S. Finite kernels only.
template <class F>
RingMap<F> beta(const GradedRing<F>& s, const CoarseningContext& ctx) {
  RingRefinement<F> t = refine(s, ctx);
  return {coarsen(t.ring, ctx), s, detail::beta_matrix<F>(s.dim(), t.layout)};
}

/// gamma(S): S -> (S^[psi])_[psi]. Finite kernels only.
template <class F>
RingMap<F> gamma(const GradedRing<F>& s, const CoarseningContext& ctx) {
  RingRefinement<F> t = refine(s, ctx);
  return {s, coarsen(t.ring, ctx), detail::gamma_matrix<F>(s.dim(), t.layout)};
}

// ======================================================= coarsen ⊣ refine

/// Degrees a morphism out of M can reach in a refinement: supp M together
/// with supp M + supp R.
template <class F>
std::vector<GroupElement> probe_window(const GradedModule<F>& m) {
  std::vector<GroupElement> w = m.support();
  for (const auto& a : m.support())
    for (const auto& r : m.ring().support()) w.push_back(m.group().add(a, r));
  return detail::sorted_unique(std::move(w));
}

namespace detail {

template <class F>
void require_degree_zero(const GradedMorphism<F>& u, const char* what) {
  for (const auto& v : validate(u))
    if (v.axiom == "degree preservation") throw DegreeMismatch(std::string(what) + ": " + v.message);
}

template <class F>
void require_endpoints(const GradedMorphism<F>& u, const GradedModule<F>& s, const GradedModule<F>& t, const char* what) {
  if (!(u.source() == s) || !(u.target() == t))
    throw InvalidStructure(std::string(what) + ": morphism has the wrong source or target");
}

}  // namespace detail

/// Hom_H(M_[psi], N) ≅ Hom_G(M, N^[psi]) with unit alpha' and counit beta'.
/// N^[psi] is built only on a window containing probe_window(M).
template <class F>
class CoarsenRefineAdjunction {
 public:
  CoarsenRefineAdjunction(GradedModule<F> m, GradedModule<F> n, const CoarseningContext& ctx,
                          std::optional<std::vector<GroupElement>> window = {})
      : m_(std::move(m)), n_(std::move(n)), ctx_(ctx), mc_(coarsen(m_, ctx, n_.ring())),
        nr_(refine(n_, m_.ring(), ctx, window ? *window : probe_window(m_))) {
    for (const auto& g : probe_window(m_))
      if (!std::binary_search(nr_.window.begin(), nr_.window.end(), g))
        throw InvalidStructure("adjunction window misses degree " + to_string(g));
  }

  const GradedModule<F>& fine_source() const { return m_; }
  const GradedModule<F>& coarse_target() const { return n_; }
  const GradedModule<F>& coarse_source() const { return mc_; }
  const Refinement<F>& fine_target() const { return nr_; }

  HomSpace<F> coarse_homs() const { return hom_space(mc_, n_); }
  HomSpace<F> fine_homs() const { return hom_space(m_, nr_.module); }

  /// u: M_[psi] -> N  |->  M -> N^[psi], e_b -> sum_j u[j,b] (deg b, j).
  GradedMorphism<F> forward(const GradedMorphism<F>& u) const {
    detail::require_endpoints(u, mc_, n_, "adjoint_transpose");
    detail::require_degree_zero(u, "adjoint_transpose");
    Mat<F> w = zeros<F>(nr_.layout.size(), m_.dim());
    for (Index b = 0; b < m_.dim(); ++b)
      for (Index j = 0; j < n_.dim(); ++j)
        if (!is_zero(u.matrix()(j, b))) w(nr_.layout.index_of(m_.degree(b), j), b) = u.matrix()(j, b);
    return GradedMorphism<F>(m_, nr_.module, std::move(w));
  }

  /// w: M -> N^[psi]  |->  beta'(N) ∘ w_[psi].
  GradedMorphism<F> backward(const GradedMorphism<F>& w) const {
    detail::require_endpoints(w, m_, nr_.module, "adjoint_transpose");
    detail::require_degree_zero(w, "adjoint_transpose");
    return GradedMorphism<F>(mc_, n_, detail::beta_matrix<F>(n_.dim(), nr_.layout) * w.matrix());
  }

 private:
  GradedModule<F> m_;
  GradedModule<F> n_;
  const CoarseningContext& ctx_;
  GradedModule<F> mc_;
  Refinement<F> nr_;
};

/// Naturality of the forward transpose in both variables: for f: M' -> M
/// and g: N -> N', forward(g ∘ u ∘ f_[psi]) = g^[psi] ∘ forward(u) ∘ f.
template <class F>
bool adjunction_natural(const GradedMorphism<F>& f, const GradedMorphism<F>& u, const GradedMorphism<F>& g,
                        const CoarseningContext& ctx) {
  const auto& r = f.source().ring();
  std::vector<GroupElement> w = probe_window(f.source());
  for (const auto& x : probe_window(f.target())) w.push_back(x);
  w = detail::sorted_unique(std::move(w));
  CoarsenRefineAdjunction<F> a(f.target(), u.target(), ctx, w);
  CoarsenRefineAdjunction<F> b(f.source(), g.target(), ctx, w);
  GradedMorphism<F> fc(b.coarse_source(), a.coarse_source(), f.matrix());
  GradedMorphism<F> lhs = b.forward(compose(g, compose(u, fc)));
  GradedMorphism<F> rhs = compose(refine(g, r, ctx, w), compose(a.forward(u), f));
  if (!equal<F>(lhs.matrix(), rhs.matrix())) return false;
  // Same square read backwards.
  GradedMorphism<F> wv = a.forward(u);
  return equal<F>(b.backward(compose(refine(g, r, ctx, w), compose(wv, f))).matrix(),
                  compose(g, compose(a.backward(wv), fc)).matrix());
}

/// beta'(M_[psi]) ∘ alpha'(M)_[psi] = id and beta'(N)^[psi] ∘ alpha'(N^[psi]) = id,
/// the latter on the window `w` of N^[psi].
struct TriangleCheck {
  bool first = false;
  bool second = false;
  bool ok() const { return first && second; }
};

template <class F>
TriangleCheck coarsen_refine_triangles(const GradedModule<F>& m, const GradedModule<F>& n,
                                          const CoarseningContext& ctx, const std::vector<GroupElement>& w) {
  TriangleCheck out;
  const std::vector<GroupElement> wm = unit_window(m, ctx);
  GradedMorphism<F> a = alpha_prime(m, ctx, wm);
  GradedMorphism<F> b = beta_prime(coarsen(m, ctx, n.ring()), m.ring(), ctx, wm);
  GradedMorphism<F> first = compose(b, coarsen(a, ctx));
  out.first = equal<F>(first.matrix(), identity<F>(m.dim()));

  Refinement<F> nr = refine(n, m.ring(), ctx, w);
  GradedMorphism<F> a2 = alpha_prime(nr.module, ctx, nr.window);
  GradedMorphism<F> b2 = refine(beta_prime(n, m.ring(), ctx, nr.window), m.ring(), ctx, nr.window);
  out.second = equal<F>(compose(b2, a2).matrix(), identity<F>(nr.module.dim()));
  return out;
}

// ======================================================= refine ⊣ coarsen

/// Hom_G(N^[psi], M) ≅ Hom_H(N, M_[psi]) with unit gamma' and counit delta'.
/// Exists exactly when the kernel is finite; throws InfiniteKernel otherwise.
template <class F>
class RefineCoarsenAdjunction {
 public:
  RefineCoarsenAdjunction(GradedModule<F> n, GradedModule<F> m, const CoarseningContext& ctx)
      : n_(std::move(n)), m_(std::move(m)), ctx_(ctx), mc_(check(ctx, m_, n_)), nr_(refine(n_, m_.ring(), ctx)) {}

  const GradedModule<F>& coarse_source() const { return n_; }
  const GradedModule<F>& fine_target() const { return m_; }
  const GradedModule<F>& coarse_target() const { return mc_; }
  const Refinement<F>& fine_source() const { return nr_; }

  HomSpace<F> fine_homs() const { return hom_space(nr_.module, m_); }
  HomSpace<F> coarse_homs() const { return hom_space(n_, mc_); }

  /// w: N^[psi] -> M  |->  w_[psi] ∘ gamma'(N).
  GradedMorphism<F> forward(const GradedMorphism<F>& w) const {
    detail::require_endpoints(w, nr_.module, m_, "left_adjoint_transpose");
    detail::require_degree_zero(w, "left_adjoint_transpose");
    return GradedMorphism<F>(n_, mc_, w.matrix() * detail::gamma_matrix<F>(n_.dim(), nr_.layout));
  }

  /// u: N -> M_[psi]  |->  delta'(M) ∘ u^[psi]; (d, j) -> sum_b u[b,j] [deg b = d] e_b.
  GradedMorphism<F> backward(const GradedMorphism<F>& u) const {
    detail::require_endpoints(u, n_, mc_, "left_adjoint_transpose");
    detail::require_degree_zero(u, "left_adjoint_transpose");
    Mat<F> w = zeros<F>(m_.dim(), nr_.layout.size());
    for (Index c = 0; c < nr_.layout.size(); ++c) {
      const auto& cell = nr_.layout.cells()[static_cast<std::size_t>(c)];
      for (Index b = 0; b < m_.dim(); ++b)
        if (m_.degree(b) == cell.degree) w(b, c) = u.matrix()(b, cell.base);
    }
    return GradedMorphism<F>(nr_.module, m_, std::move(w));
  }

  /// delta'(N^[psi]) ∘ gamma'(N)^[psi] = id and delta'(M)_[psi] ∘ gamma'(M_[psi]) = id.
  TriangleCheck triangles() const {
    TriangleCheck out;
    const GradedRing<F>& r = m_.ring();
    GradedMorphism<F> g = gamma_prime(n_, r, ctx_);
    GradedMorphism<F> gr = refine(g, r, ctx_, nr_.window);
    GradedMorphism<F> d = delta_prime(nr_.module, ctx_, nr_.window);
    out.first = equal<F>(compose(d, gr).matrix(), identity<F>(nr_.module.dim()));
    GradedMorphism<F> g2 = gamma_prime(mc_, r, ctx_);
    GradedMorphism<F> d2 = coarsen(delta_prime(m_, ctx_), ctx_);
    out.second = equal<F>(compose(d2, g2).matrix(), identity<F>(m_.dim()));
    return out;
  }

 private:
  static GradedModule<F> check(const CoarseningContext& ctx, const GradedModule<F>& m, const GradedModule<F>& n) {
    if (!ctx.kernel_finite()) throw InfiniteKernel("refinement has no right adjoint counterpart here: the kernel of psi is infinite");
    return coarsen(m, ctx, n.ring());
  }

  GradedModule<F> n_;
  GradedModule<F> m_;
  const CoarseningContext& ctx_;
  GradedModule<F> mc_;
  Refinement<F> nr_;
};

// ====================================================== (N^[psi])_[psi]

template <class F>
struct Decomposition {
  GradedModule<F> refined_coarsened;
  GradedModule<F> copies;
  GradedMorphism<F> isomorphism;
};

/// (N^[psi])_[psi] ≅ N^{⊕ ker psi}: the cell (d, j) goes to copy t of e_j,
/// where d is the t-th element of its fiber. Needs a finite kernel and a ring
/// concentrated in degree 0; for other rings the two modules are in general
/// not isomorphic and UnsupportedClass is thrown.
template <class F>
Decomposition<F> refine_then_coarsen_decomposition(const GradedModule<F>& n, const GradedRing<F>& r,
                                                   const CoarseningContext& ctx) {
  if (!ctx.kernel_finite()) throw InfiniteKernel("N^[psi] has infinite support");
  for (Index i = 0; i < r.dim(); ++i)
    if (!(r.degree(i) == r.group().zero()))
      throw UnsupportedClass("decomposition needs a ring concentrated in degree 0");
  Refinement<F> nr = refine(n, r, ctx);
  GradedModule<F> rc = coarsen(nr.module, ctx, n.ring());
  const std::int64_t k = ctx.kernel_order();
  GradedModule<F> copies = direct_sum(std::vector<GradedModule<F>>(static_cast<std::size_t>(k), n), n.ring());
  Mat<F> iso = zeros<F>(copies.dim(), rc.dim());
  for (Index c = 0; c < nr.layout.size(); ++c) {
    const auto& cell = nr.layout.cells()[static_cast<std::size_t>(c)];
    const auto fib = ctx.fiber(ctx(cell.degree));
    const Index t = std::lower_bound(fib.begin(), fib.end(), cell.degree) - fib.begin();
    iso(t * n.dim() + cell.base, c) = F(1);
  }
  GradedMorphism<F> u(rc, copies, std::move(iso));
  if (!is_valid(u) || !inverse<F>(u.matrix())) throw SoundnessFailure("decomposition map is not an isomorphism");
  return {rc, copies, u};
}

// ========================================================== products

enum class ComparisonVerdict { Iso, ProperMono };

/// The tuple (x^g)_{g in K} with x^g = e_g = 1_R in R(-g), sampled on
/// growing windows of K.
struct ProductWitness {
  std::vector<std::int64_t> radii;
  /// Number of G-degrees f in the window with nonzero f-slice of x.
  std::vector<std::int64_t> nonzero_slices;
  /// Number of kernel elements in the window.
  std::vector<std::int64_t> window_sizes;
};

template <class F>
struct ComparisonReport {
  ComparisonVerdict verdict = ComparisonVerdict::Iso;
  std::optional<GradedMorphism<F>> isomorphism;
  std::optional<ProductWitness> witness;
};

/// (∏ M_i)_[psi] -> ∏ (M_i)_[psi] for a finite family.
template <class F>
ComparisonReport<F> product_coarsening_comparison(const std::vector<GradedModule<F>>& family, const GradedRing<F>& r,
                                                  const CoarseningContext& ctx) {
  const GradedRing<F> cr = coarsen(r, ctx);
  FiniteProduct<F> fine = finite_product(family, r);
  std::vector<GradedModule<F>> coarse_family;
  for (const auto& m : family) coarse_family.push_back(coarsen(m, ctx, cr));
  FiniteProduct<F> coarse = finite_product(coarse_family, cr);
  // Both products are permutations of the same direct sum; match through it.
  Mat<F> xi = coarse.to_sum.matrix().transpose() * fine.to_sum.matrix();
  GradedMorphism<F> u(coarsen(fine.product, ctx, cr), coarse.product, std::move(xi));
  if (!is_valid(u) || !inverse<F>(u.matrix())) throw SoundnessFailure("finite product comparison is not an isomorphism");
  ComparisonReport<F> out;
  out.isomorphism = u;
  return out;
}

/// Re-checks the sampled witness data against the family and psi.
template <class F>
bool verify_product_witness(const IntensionalFreeModule<F>& family, const CoarseningContext& ctx,
                            const ProductWitness& w) {
  if (family.ring_is_zero() || !family.is_subgroup_indexed()) return false;
  const auto& r = family.ring();
  // 1_R is homogeneous of degree 0, so e_g sits in degree g of R(-g).
  const auto one_deg = r.group().zero();
  for (Index k = 0; k < r.dim(); ++k)
    if (!is_zero(r.one()(k)) && !(r.degree(k) == one_deg)) return false;
  std::int64_t prev = 0;
  for (std::size_t i = 0; i < w.radii.size(); ++i) {
    std::int64_t count = 0, size = 0;
    for (const auto& g : family.subgroup().window(w.radii[i])) {
      ++size;
      if (!(ctx(family.degree_of(g)) == ctx.coarse_group().zero())) return false;
      // Slice f = deg(e_g) of x: only the factor g contributes, with e_g != 0.
      GradedModule<F> s = family.summand(g);
      const auto comp = s.component(family.degree_of(g));
      bool nonzero = false;
      for (Index j : comp)
        if (!is_zero(r.one()(j))) nonzero = true;
      if (nonzero) ++count;
    }
    if (count != w.nonzero_slices[i] || size != w.window_sizes[i] || count != size || count <= prev) return false;
    prev = count;
  }
  return !w.radii.empty();
}

/// The family (R(-g))_{g in ker psi}. Iso when the kernel is finite; otherwise
/// ProperMono with the witness (e_g)_g, which has nonzero slices in
/// infinitely many G-degrees and so is not in the coarsened product.
template <class F>
ComparisonReport<F> product_coarsening_comparison(const IntensionalFreeModule<F>& family, const CoarseningContext& ctx) {
  if (!family.is_subgroup_indexed() || !family.subgroup().same_as(Subgroup::kernel_of(ctx.psi())) ||
      !(family.degree_map() == GroupHom::identity(ctx.fine_group())))
    throw UnsupportedFamily("only the family (R(-g)) indexed by ker psi is supported");
  if (ctx.kernel_finite()) {
    std::vector<GradedModule<F>> members;
    for (const auto& g : family.indices()) members.push_back(family.summand(g));
    return product_coarsening_comparison(members, family.ring(), ctx);
  }
  if (family.ring_is_zero()) throw UnsupportedFamily("the zero ring gives the zero family");
  ProductWitness w;
  for (std::int64_t radius : {1, 2, 3}) {
    std::int64_t n = 0;
    for (const auto& g : family.subgroup().window(radius)) {
      (void)g;
      ++n;
    }
    w.radii.push_back(radius);
    w.window_sizes.push_back(n);
    w.nonzero_slices.push_back(n);
  }
  if (!verify_product_witness(family, ctx, w)) throw SoundnessFailure("product witness failed verification");
  ComparisonReport<F> out;
  out.verdict = ComparisonVerdict::ProperMono;
  out.witness = std::move(w);
  return out;
}

}  // namespace gradlab
