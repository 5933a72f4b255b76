#include "doctest.h"
#include "fixtures.hpp"

using namespace gradlab;
using namespace fx;

TEST_CASE("validate accepts the group algebra and the dual numbers") {
  CHECK(validate(group_algebra_z2<F2>()).empty());
  CHECK(validate(dual_numbers_z2<F2>()).empty());
  CHECK(validate(dual_numbers_z2<Q>()).empty());
  CHECK(validate(GradedModule<F2>::regular(dual_numbers_z2<F2>())).empty());
}

TEST_CASE("validate reports degree additivity at (t,t)") {
  // t*t = t: degree 1+1 = 0 but the product sits in degree 1.
  auto r = dual_numbers_z2<F2>();
  std::vector<Mat<F2>> mul{r.left_multiplication(0), mat<F2>({{0, 0}, {1, 1}})};
  GradedRing<F2> bad(r.group(), r.basis(), mul, r.one());
  auto v = validate(bad);
  REQUIRE_FALSE(v.empty());
  bool found = false;
  for (const auto& x : v)
    if (x.message.rfind("degree additivity at (t,t)", 0) == 0) found = true;
  CHECK(found);
  // t*t = 1 is degree-correct (it is the group algebra), so validate accepts it.
  std::vector<Mat<F2>> mul2{r.left_multiplication(0), mat<F2>({{0, 1}, {1, 0}})};
  CHECK(validate(GradedRing<F2>(r.group(), r.basis(), mul2, r.one())).empty());
}

TEST_CASE("validate is idempotent and reports the unit") {
  auto r = group_algebra_z2<F3>();
  GradedRing<F3> no_unit(r.group(), r.basis(), {r.left_multiplication(0), r.left_multiplication(1)}, vec<F3>({2, 0}));
  auto v1 = validate(no_unit);
  auto v2 = validate(no_unit);
  REQUIRE(v1.size() == v2.size());
  REQUIRE_FALSE(v1.empty());
  CHECK(v1.front().axiom == "unit");
  CHECK(v1.front().message == v2.front().message);
}

TEST_CASE("shift examples") {
  auto r = group_algebra_z2<F2>();
  auto m = GradedModule<F2>::regular(r);
  CHECK(shift(m, r.group().zero()) == m);
  auto m1 = shift(m, el(Z2(), {1}));
  auto c = m1.component(el(Z2(), {0}));
  REQUIRE(c.size() == 1);
  CHECK(m1.basis()[static_cast<std::size_t>(c[0])].name == "e(1)");

  auto k = field_ring<F2>(Z());
  auto km = shift(GradedModule<F2>::regular(k), el(Z(), {-1}));
  CHECK(km.degree(0) == el(Z(), {1}));
  // shift(shift(M,g),h) = shift(M,g+h)
  auto a = shift(shift(km, el(Z(), {2})), el(Z(), {3}));
  CHECK(a == shift(km, el(Z(), {5})));
}

TEST_CASE("hom_space examples") {
  auto r = group_algebra_z2<F2>();
  auto m = GradedModule<F2>::regular(r);
  CHECK(hom_space(m, m).dim() == 1);
  CHECK(hom_space(m, shift(m, el(Z2(), {1}))).dim() == 1);
  CHECK(hom_space(m, GradedModule<F2>::zero(r)).dim() == 0);
  CHECK(hom_space(GradedModule<F2>::zero(r), m).dim() == 0);
  for (const auto& u : hom_space(m, m).morphisms()) CHECK(is_valid(u));
}

TEST_CASE("hom_space dimensions add over direct sums") {
  auto r = dual_numbers_z2<F3>();
  auto m = GradedModule<F3>::regular(r);
  auto q = quotient_by(GradedSubmodule<F3>::generated_by(m, mat<F3>({{0}, {1}}))).module;
  auto n1 = shift(m, el(Z2(), {1}));
  for (const auto& src : {m, q, n1}) {
    const Index a = hom_space(src, q).dim(), b = hom_space(src, n1).dim();
    CHECK(hom_space(src, direct_sum<F3>({q, n1})).dim() == a + b);
  }
}

TEST_CASE("module calculus") {
  auto r = dual_numbers_z2<F2>();
  auto reg = GradedModule<F2>::regular(r);
  auto m = reg;                                               // dim 2
  auto n = direct_sum<F2>({reg, shift(quotient_by(GradedSubmodule<F2>::generated_by(reg, mat<F2>({{0}, {1}}))).module, el(Z2(), {1}))});
  REQUIRE(n.dim() == 3);
  auto s = direct_sum<F2>({m, n});
  CHECK(s.dim() == 5);
  CHECK(is_valid(s));
  for (const auto& [g, d] : s.component_dims()) {
    auto dm = m.component_dims(), dn = n.component_dims();
    CHECK(d == dm[g] + dn[g]);
  }
  auto p = finite_product<F2>({m, n}, r);
  CHECK(is_valid(p.product));
  CHECK(is_valid(p.to_sum));
  CHECK(inverse<F2>(p.to_sum.matrix()).has_value());

  // kernel of R -> R/(t) is (t)
  auto t_ideal = GradedSubmodule<F2>::generated_by(reg, mat<F2>({{0}, {1}}));
  auto quo = quotient_by(t_ideal);
  CHECK(is_valid(quo.projection));
  auto ker = kernel_of(quo.projection);
  CHECK(ker.dim() == 1);
  CHECK(ker == t_ideal);
  CHECK(image_of(quo.projection).dim() == 1);
  CHECK_THROWS_AS(GradedSubmodule<F2>::spanned_by(reg, mat<F2>({{1}, {1}})), NonHomogeneousInput);
  CHECK_THROWS_AS(GradedSubmodule<F2>::spanned_by(reg, mat<F2>({{1}, {0}})), InvalidStructure);

  auto id = GradedMorphism<F2>::identity(n);
  auto inj = sum_injection<F2>({m, n}, s, 1);
  CHECK(compose(inj, id) == inj);
  CHECK(compose(sum_projection<F2>({m, n}, s, 1), inj) == id);
  CHECK_THROWS_AS(direct_sum<F2>({reg, GradedModule<F2>::regular(group_algebra_z2<F2>())}), RingMismatch);
}

TEST_CASE("rank-nullity degreewise on quotient maps and hom bases") {
  auto r = dual_numbers_z2<F3>();
  auto reg = GradedModule<F3>::regular(r);
  auto m = direct_sum<F3>({reg, shift(reg, el(Z2(), {1}))});
  for (const auto& u : hom_space(m, m).morphisms()) {
    auto k = kernel_of(u);
    auto im = image_of(u);
    CHECK(k.dim() + im.dim() == m.dim());
    CHECK(is_valid(k.module()));
    CHECK(is_valid(k.inclusion()));
  }
}

TEST_CASE("zero module is first class") {
  auto r = dual_numbers_z2<F2>();
  auto z = GradedModule<F2>::zero(r);
  CHECK(is_valid(z));
  CHECK(direct_sum<F2>({z, z}).dim() == 0);
  CHECK(kernel_of(GradedMorphism<F2>::identity(z)).dim() == 0);
  CHECK(quotient_by(GradedSubmodule<F2>::whole(z)).module.dim() == 0);
}
