#include "doctest.h"
#include "fixtures.hpp"

#include "gradlab/injective.hpp"

using namespace gradlab;
using namespace fx;

TEST_CASE("subspace enumeration counts") {
  // Gaussian binomial sums: number of subspaces of F_q^n.
  CHECK(detail::all_subspaces<F2>(0).size() == 1);
  CHECK(detail::all_subspaces<F2>(2).size() == 5);
  CHECK(detail::all_subspaces<F2>(3).size() == 16);
  CHECK(detail::all_subspaces<F2>(4).size() == 67);
  CHECK(detail::all_subspaces<F3>(2).size() == 6);
  CHECK(detail::all_subspaces<F3>(3).size() == 28);
}

TEST_CASE("graded ideals of the fixture rings") {
  auto dual = dual_numbers_z2<F2>();
  auto ideals = enumerate_graded_ideals(dual);
  REQUIRE(ideals.size() == 3);
  CHECK(ideals[1].dim() == 1);
  CHECK(ideals[1].basis() == mat<F2>({{0}, {1}}));

  CHECK(enumerate_graded_ideals(field_ring<F2>(Z2())).size() == 2);

  // e0 + e1 is not homogeneous, so only the trivial ideals are graded.
  auto ga = group_algebra_z2<F2>();
  CHECK(enumerate_graded_ideals(ga).size() == 2);
  auto ungraded = enumerate_graded_ideals(coarsen(ga, CoarseningContext(psi_Z2_0())));
  REQUIRE(ungraded.size() == 3);
  CHECK(ungraded[1].basis() == mat<F2>({{1}, {1}}));

  auto big = GradedRing<F3>::truncated_polynomial(Z(), el(Z(), {1}), 5);
  CHECK_THROWS_AS(enumerate_graded_ideals(big), GuardExceeded);
  CHECK(enumerate_graded_ideals(big, 5).size() == 6);
  CHECK_THROWS_AS(enumerate_graded_ideals(field_ring<Q>(Z())), UnsupportedField);
}

TEST_CASE("Baer criterion examples") {
  auto r = dual_numbers_z2<F2>();
  auto reg = GradedModule<F2>::regular(r);
  CHECK(is_graded_injective(reg).injective);
  CHECK(is_graded_injective(GradedModule<F2>::zero(r)).injective);

  auto t = GradedSubmodule<F2>::generated_by(reg, mat<F2>({{0}, {1}}));
  auto q = quotient_by(t).module;
  auto rep = is_graded_injective(q);
  CHECK_FALSE(rep.injective);
  REQUIRE(rep.witness);
  CHECK(rep.witness->shift == el(Z2(), {1}));
  CHECK(rep.witness->ideal == mat<F2>({{0}, {1}}));
  CHECK(verify_baer_witness(q, *rep.witness));

  auto tampered = *rep.witness;
  tampered.shift = el(Z2(), {0});
  CHECK_FALSE(verify_baer_witness(q, tampered));
  auto zero = *rep.witness;
  zero.morphism.setZero();
  CHECK_FALSE(verify_baer_witness(q, zero));
  // Against an injective module every nonzero morphism extends.
  auto r_w = *rep.witness;
  r_w.morphism = mat<F2>({{0}, {1}});
  r_w.shift = el(Z2(), {0});
  CHECK_FALSE(verify_baer_witness(reg, r_w));
}

TEST_CASE("injectivity under coarsening") {
  auto r = dual_numbers_z2<F2>();
  auto reg = GradedModule<F2>::regular(r);
  CoarseningContext to0(psi_Z2_0());
  auto a = injectivity_transfer_check(reg, to0);
  CHECK(a.fine);
  CHECK(a.coarse);
  auto q = quotient_by(GradedSubmodule<F2>::generated_by(reg, mat<F2>({{0}, {1}}))).module;
  auto b = injectivity_transfer_check(q, to0);
  CHECK_FALSE(b.fine);
  CHECK_FALSE(b.coarse);
  auto c = injectivity_transfer_check(q, CoarseningContext(GroupHom::identity(Z2())));
  CHECK(c.fine == c.coarse);

  auto ga = GradedModule<F3>::regular(group_algebra_z2<F3>());
  auto d = injectivity_transfer_check(ga, CoarseningContext(psi_Z2_0()));
  CHECK(d.fine);
  CHECK(d.coarse);
}

TEST_CASE("cogenerators") {
  auto r = dual_numbers_z2<F2>();
  auto reg = GradedModule<F2>::regular(r);
  auto rep = is_cogenerator(reg);
  CHECK_FALSE(rep.cogenerator);
  REQUIRE(rep.witness);
  CHECK(rep.witness->shift == el(Z2(), {0}));
  CHECK(rep.evidence.size() == 2);

  CHECK(is_cogenerator(direct_sum<F2>({reg, shift(reg, el(Z2(), {1}))})).cogenerator);

  auto q = quotient_by(GradedSubmodule<F2>::generated_by(reg, mat<F2>({{0}, {1}}))).module;
  auto rq = is_cogenerator(q);
  CHECK_FALSE(rq.cogenerator);
  CHECK(rq.witness->shift == el(Z2(), {1}));
  CHECK_FALSE(is_cogenerator(GradedModule<F2>::zero(r)).cogenerator);

  auto k = field_ring<F2>(Z());
  auto rk = is_cogenerator(GradedModule<F2>::regular(k));
  CHECK_FALSE(rk.cogenerator);
  CHECK(rk.witness->shift == el(Z(), {1}));
  CHECK(is_cogenerator(GradedModule<F2>::regular(field_ring<F2>(FgAbGroup()))).cogenerator);
}
