#include "doctest.h"
#include "fixtures.hpp"

#include "gradlab/coarsen.hpp"

using namespace gradlab;
using namespace fx;

TEST_CASE("coarsen examples") {
  CoarseningContext to0(psi_Z2_0());
  auto reg = GradedModule<F2>::regular(group_algebra_z2<F2>());
  auto c = coarsen(reg, to0);
  CHECK(c.component_dims().size() == 1);
  CHECK(c.component_dims().begin()->second == 2);

  CoarseningContext id(GroupHom::identity(Z2()));
  CHECK(coarsen(reg, id) == reg);
  CHECK(coarsen(reg.ring(), id) == reg.ring());

  auto k = field_ring<F2>(Z());
  auto m = free_module(k, {el(Z(), {0}), el(Z(), {1}), el(Z(), {1})});
  CoarseningContext mod2(psi_Z_Z2());
  auto dims = coarsen(m, mod2).component_dims();
  CHECK(dims[el(Z2(), {0})] == 1);
  CHECK(dims[el(Z2(), {1})] == 2);
  CHECK_THROWS_AS(coarsen(m, to0), GroupMismatch);
}

TEST_CASE("context rejects non-epimorphisms") {
  CHECK_THROWS_AS(CoarseningContext(hom(Z(), Z(), {{2}})), NotEpimorphism);
  CoarseningContext c(psi_Z4_Z2());
  CHECK(c.kernel_order() == 2);
  CHECK(c.fiber(el(Z2(), {1})) == std::vector<GroupElement>{el(Z4(), {1}), el(Z4(), {3})});
  CHECK_THROWS_AS(CoarseningContext(psi_Z_0()).kernel_order(), InfiniteKernel);
}

template <class F>
void check_example_b() {
  // S ungraded, psi: Z/2 -> 0. Cells (0,e) and (1,e) for each basis element e of S.
  CoarseningContext ctx(psi_Z2_0());
  for (const auto& s : {field_ring<F>(FgAbGroup()), GradedRing<F>::truncated_polynomial(FgAbGroup(), FgAbGroup().zero(), 2)}) {
    auto sr = refine(s, ctx);
    CHECK(is_valid(sr.ring));
    const Index n = s.dim();
    REQUIRE(sr.ring.dim() == 2 * n);
    // Pack (a, b) with a, b in S into refined coordinates.
    auto pack = [&](const Vec<F>& a, const Vec<F>& b) {
      Vec<F> v = zero_vector<F>(2 * n);
      for (Index j = 0; j < n; ++j) {
        v(sr.layout.index_of(el(Z2(), {0}), j)) = a(j);
        v(sr.layout.index_of(el(Z2(), {1}), j)) = b(j);
      }
      return v;
    };
    std::vector<Vec<F>> samples;
    for (Index i = 0; i < n; ++i) {
      Vec<F> e = zero_vector<F>(n);
      e(i) = F(1);
      samples.push_back(e);
    }
    samples.push_back(zero_vector<F>(n));
    Vec<F> mix = zero_vector<F>(n);
    for (Index i = 0; i < n; ++i) mix(i) = F(static_cast<long long>(i) + 2);
    samples.push_back(mix);
    for (const auto& a : samples)
      for (const auto& b : samples)
        for (const auto& c : samples)
          for (const auto& d : samples) {
            Vec<F> lhs = sr.ring.multiply(pack(a, b), pack(c, d));
            Vec<F> rhs = pack(Vec<F>(s.multiply(a, c) + s.multiply(b, d)), Vec<F>(s.multiply(a, d) + s.multiply(c, b)));
            CHECK(equal<F>(Mat<F>(lhs), Mat<F>(rhs)));
          }
  }
}

TEST_CASE("ring refinement along Z/2 -> 0") {
  check_example_b<F2>();
  check_example_b<Q>();
  check_example_b<F3>();
  CoarseningContext ctx(psi_Z2_0());
  auto sr = refine(field_ring<F2>(FgAbGroup()), ctx);
  Vec<F2> x = vec<F2>({1, 1});
  CHECK(is_zero_matrix<F2>(sr.ring.multiply(x, x)));
  CHECK_FALSE(is_zero_matrix<F2>(x));
}

TEST_CASE("refinement along the identity is the identity") {
  CoarseningContext id(GroupHom::identity(Z2()));
  auto r = dual_numbers_z2<F3>();
  auto reg = GradedModule<F3>::regular(r);
  auto nr = refine(reg, r, id);
  CHECK(nr.module.dim() == reg.dim());
  for (Index i = 0; i < r.dim(); ++i) CHECK(equal<F3>(nr.module.action(i), reg.action(i)));
  CHECK(equal<F3>(alpha_prime(reg, id).matrix(), identity<F3>(2)));
  CHECK(equal<F3>(delta_prime(reg, id).matrix(), identity<F3>(2)));
  CHECK(equal<F3>(beta_prime(reg, r, id).matrix(), identity<F3>(2)));
  CHECK(equal<F3>(gamma_prime(reg, r, id).matrix(), identity<F3>(2)));
}

TEST_CASE("lazy refinement answers component queries") {
  CoarseningContext ctx(psi_Z_0());
  auto k = field_ring<F2>(Z());
  auto n = GradedModule<F2>::regular(coarsen(k, ctx));
  LazyRefinedModule<F2> lazy(n, k, ctx);
  CHECK(lazy.component(el(Z(), {17})).size() == 1);
  CHECK_THROWS_AS(lazy.materialize(), InfiniteSupport);
  auto w = lazy.materialize({el(Z(), {-1}), el(Z(), {0}), el(Z(), {1})});
  CHECK(w.module.dim() == 3);
  CHECK(is_valid(w.module));
}

template <class F>
void check_alpha_delta_beta_gamma(const GradedModule<F>& m, const CoarseningContext& ctx, long long expect_scale) {
  auto a = alpha_prime(m, ctx);
  auto d = delta_prime(m, ctx);
  CHECK(is_valid(a));
  CHECK(is_valid(d));
  CHECK(equal<F>(compose(d, a).matrix(), identity<F>(m.dim())));
  auto n = coarsen(m, ctx);
  auto b = beta_prime(n, m.ring(), ctx);
  auto g = gamma_prime(n, m.ring(), ctx);
  CHECK(is_valid(b));
  CHECK(is_valid(g));
  Mat<F> bg = compose(b, g).matrix();
  CHECK(equal<F>(bg, Mat<F>(F(expect_scale) * identity<F>(n.dim()))));
}

TEST_CASE("canonical transformations on Z/2 -> 0") {
  CoarseningContext ctx(psi_Z2_0());
  check_alpha_delta_beta_gamma(GradedModule<Q>::regular(group_algebra_z2<Q>()), ctx, 2);
  check_alpha_delta_beta_gamma(GradedModule<F2>::regular(group_algebra_z2<F2>()), ctx, 0);
  check_alpha_delta_beta_gamma(GradedModule<F3>::regular(dual_numbers_z2<F3>()), ctx, 2);
  CHECK_THROWS_AS(gamma_prime(GradedModule<F2>::regular(field_ring<F2>(FgAbGroup())), field_ring<F2>(Z()),
                              CoarseningContext(psi_Z_0())),
                  InfiniteKernel);
}

TEST_CASE("ring versions: alpha and beta are ring maps, delta and gamma are only additive") {
  CoarseningContext ctx(psi_Z2_0());
  auto r = group_algebra_z2<F2>();
  CHECK(alpha(r, ctx).is_ring_morphism());
  CHECK(beta(coarsen(r, ctx), ctx).is_ring_morphism());
  // (0, e1)^2 = (0, e0) maps to e0, but (0, e1) maps to 0.
  CHECK_FALSE(delta(r, ctx).is_multiplicative());
  CHECK_FALSE(gamma(coarsen(r, ctx), ctx).is_unital());
  CoarseningContext id(GroupHom::identity(Z2()));
  CHECK(delta(r, id).is_ring_morphism());
  CHECK(gamma(r, id).is_ring_morphism());
}

TEST_CASE("coarsen-refine adjunction example") {
  CoarseningContext ctx(psi_Z2_0());
  auto r = group_algebra_z2<F2>();
  auto m = GradedModule<F2>::regular(r);
  auto n = coarsen(m, ctx);
  CoarsenRefineAdjunction<F2> adj(m, n, ctx);
  auto coarse = adj.coarse_homs();
  auto fine = adj.fine_homs();
  CHECK(coarse.dim() == 2);
  CHECK(fine.dim() == 2);
  for (const auto& u : coarse.morphisms()) {
    auto w = adj.forward(u);
    CHECK(is_valid(w));
    CHECK(fine.coordinates(w.matrix()).has_value());
    CHECK(adj.backward(w) == u);
  }
  for (const auto& w : fine.morphisms()) CHECK(adj.forward(adj.backward(w)) == w);
  auto zero = GradedMorphism<F2>::zero(n, n);
  CHECK(adj.forward(zero).is_zero());
  auto unit = adj.forward(GradedMorphism<F2>::identity(n));
  CHECK(equal<F2>(unit.matrix(), alpha_prime(m, ctx, adj.fine_target().window).matrix()));
  CHECK(coarsen_refine_triangles(m, n, ctx, adj.fine_target().window).ok());
}

TEST_CASE("coarsen-refine adjunction with infinite kernel") {
  CoarseningContext ctx(psi_Z_0());
  auto r = GradedRing<F3>::truncated_polynomial(Z(), el(Z(), {1}), 2);
  auto m = free_module(r, {el(Z(), {0}), el(Z(), {2})});
  auto cr = coarsen(r, ctx);
  auto n = GradedModule<F3>::regular(cr);
  CoarsenRefineAdjunction<F3> adj(m, n, ctx);
  auto coarse = adj.coarse_homs();
  auto fine = adj.fine_homs();
  CHECK(coarse.dim() == fine.dim());
  for (const auto& u : coarse.morphisms()) CHECK(adj.backward(adj.forward(u)) == u);
  for (const auto& w : fine.morphisms()) CHECK(adj.forward(adj.backward(w)) == w);
  auto t = coarsen_refine_triangles(m, n, ctx, probe_window(m));
  CHECK(t.first);
  CHECK(t.second);
}

TEST_CASE("adjunction naturality on small modules") {
  CoarseningContext ctx(psi_Z4_Z2());
  auto r = GradedRing<F2>::truncated_polynomial(Z4(), el(Z4(), {1}), 2);
  auto m = free_module(r, {el(Z4(), {0})});
  auto m2 = free_module(r, {el(Z4(), {1}), el(Z4(), {0})});
  auto n = coarsen(m2, ctx);
  auto n2 = coarsen(free_module(r, {el(Z4(), {2})}), ctx);
  auto fs = hom_space(m, m2).morphisms();
  auto us = hom_space(coarsen(m2, ctx), n).morphisms();
  auto gs = hom_space(n, n2).morphisms();
  REQUIRE(!fs.empty());
  REQUIRE(!us.empty());
  REQUIRE(!gs.empty());
  CoarsenRefineAdjunction<F2> adj(m2, n, ctx);
  Mat<F2> skew = zeros<F2>(n.dim(), m2.dim());
  REQUIRE_FALSE(n.degree(0) == adj.coarse_source().degree(1));
  skew(0, 1) = F2(1);
  CHECK_THROWS_AS(adj.forward(GradedMorphism<F2>(adj.coarse_source(), n, skew)), DegreeMismatch);
  for (const auto& f : fs)
    for (const auto& u : us)
      for (const auto& g : gs) CHECK(adjunction_natural(f, u, g, ctx));
}

TEST_CASE("refine-coarsen adjunction") {
  CoarseningContext ctx(psi_Z2_0());
  auto r = field_ring<F2>(Z2());
  auto m = free_module(r, {el(Z2(), {0}), el(Z2(), {1})});
  auto n = GradedModule<F2>::regular(coarsen(r, ctx));
  RefineCoarsenAdjunction<F2> adj(n, m, ctx);
  auto fine = adj.fine_homs();
  auto coarse = adj.coarse_homs();
  CHECK(fine.dim() == 2);
  CHECK(coarse.dim() == 2);
  for (const auto& w : fine.morphisms()) {
    auto u = adj.forward(w);
    CHECK(is_valid(u));
    CHECK(adj.backward(u) == w);
  }
  for (const auto& u : coarse.morphisms()) CHECK(adj.forward(adj.backward(u)) == u);
  CHECK(adj.triangles().ok());

  CoarseningContext id(GroupHom::identity(Z2()));
  RefineCoarsenAdjunction<F2> same(m, m, id);
  for (const auto& w : same.fine_homs().morphisms()) CHECK(equal<F2>(same.forward(w).matrix(), w.matrix()));

  CoarseningContext inf(psi_Z_0());
  auto kz = field_ring<F2>(Z());
  CHECK_THROWS_AS(RefineCoarsenAdjunction<F2>(GradedModule<F2>::regular(coarsen(kz, inf)), GradedModule<F2>::regular(kz), inf),
                  InfiniteKernel);
}

TEST_CASE("refine then coarsen decomposition") {
  CoarseningContext to0(psi_Z2_0());
  auto k0 = field_ring<F2>(Z2());
  auto big = free_module(coarsen(k0, to0), {FgAbGroup().zero(), FgAbGroup().zero(), FgAbGroup().zero()});
  auto d = refine_then_coarsen_decomposition(big, k0, to0);
  CHECK(d.refined_coarsened.dim() == 6);
  CHECK(d.copies.dim() == 6);

  CoarseningContext id(GroupHom::identity(Z2()));
  auto m = free_module(k0, {el(Z2(), {1}), el(Z2(), {0})});
  auto di = refine_then_coarsen_decomposition(m, k0, id);
  CHECK(equal<F2>(di.isomorphism.matrix(), identity<F2>(2)));

  CoarseningContext c4(psi_Z4_Z2());
  auto k4 = field_ring<F3>(Z4());
  auto one = GradedModule<F3>::regular(coarsen(k4, c4));
  CHECK(refine_then_coarsen_decomposition(one, k4, c4).refined_coarsened.dim() == 2);
  CHECK_THROWS_AS(refine_then_coarsen_decomposition(GradedModule<F2>::regular(field_ring<F2>(FgAbGroup())),
                                                    field_ring<F2>(Z()), CoarseningContext(psi_Z_0())),
                  InfiniteKernel);
}

TEST_CASE("refine then coarsen is not N^2 over a group algebra") {
  // Trivial module N = K over K[Z/2] (ungraded): e1 acts as 1 on N + N but not
  // on (N^[psi])_[psi], which is the regular module.
  CoarseningContext ctx(psi_Z2_0());
  auto r = group_algebra_z2<F2>();
  auto cr = coarsen(r, ctx);
  auto n = GradedModule<F2>::from_table(cr, {{"x", FgAbGroup().zero()}}, {{0, 0, vec<F2>({1})}, {1, 0, vec<F2>({1})}});
  REQUIRE(is_valid(n));
  auto rc = coarsen(refine(n, r, ctx).module, ctx, cr);
  CHECK_FALSE(equal<F2>(rc.action(1), identity<F2>(2)));
  CHECK(equal<F2>(direct_sum<F2>({n, n}).action(1), identity<F2>(2)));
  CHECK_THROWS_AS(refine_then_coarsen_decomposition(n, r, ctx), UnsupportedClass);
}

TEST_CASE("product comparison") {
  CoarseningContext ctx(psi_Z4_Z2());
  auto r = GradedRing<F3>::truncated_polynomial(Z4(), el(Z4(), {1}), 2);
  auto a = free_module(r, {el(Z4(), {0})});
  auto b = free_module(r, {el(Z4(), {3}), el(Z4(), {2})});
  auto rep = product_coarsening_comparison<F3>({a, b}, r, ctx);
  CHECK(rep.verdict == ComparisonVerdict::Iso);
  auto single = product_coarsening_comparison<F3>({a}, r, ctx);
  CHECK(equal<F3>(single.isomorphism->matrix(), identity<F3>(a.dim())));

  CoarseningContext inf(psi_Z_0());
  auto k = field_ring<F2>(Z());
  auto fam = IntensionalFreeModule<F2>::subgroup_indexed(k, Subgroup::kernel_of(inf.psi()));
  auto pm = product_coarsening_comparison(fam, inf);
  CHECK(pm.verdict == ComparisonVerdict::ProperMono);
  REQUIRE(pm.witness.has_value());
  CHECK(verify_product_witness(fam, inf, *pm.witness));
  auto tampered = *pm.witness;
  tampered.nonzero_slices.back() -= 1;
  CHECK_FALSE(verify_product_witness(fam, inf, tampered));

  auto other = IntensionalFreeModule<F2>::subgroup_indexed(k, Subgroup(Z(), {el(Z(), {2})}));
  CHECK_THROWS_AS(product_coarsening_comparison(other, inf), UnsupportedFamily);

  CoarseningContext fin(psi_Z2_0());
  auto fam2 = IntensionalFreeModule<F2>::subgroup_indexed(group_algebra_z2<F2>(), Subgroup::kernel_of(fin.psi()));
  CHECK(product_coarsening_comparison(fam2, fin).verdict == ComparisonVerdict::Iso);
}
