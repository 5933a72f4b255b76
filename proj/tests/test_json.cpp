#include "doctest.h"
#include "fixtures.hpp"

#include "gradlab/json_io.hpp"

using namespace gradlab;
using namespace fx;
using io::json;

TEST_CASE_TEMPLATE("rings and modules round-trip bit-exactly", F, F2, F3, Q) {
  for (const auto& r : {dual_numbers_z2<F>(), group_algebra_z2<F>(), field_ring<F>(Z_Z2())}) {
    json j = io::to_json(r);
    auto back = io::ring_from_json<F>(j);
    CHECK(back == r);
    CHECK(io::to_json(back).dump() == j.dump());
    auto m = direct_sum<F>({GradedModule<F>::regular(r), shift(GradedModule<F>::regular(r), r.group().generator(0))});
    json jm = io::to_json(m);
    auto mb = io::module_from_json<F>(jm);
    CHECK(mb == m);
    CHECK(io::to_json(mb).dump() == jm.dump());
  }
}

TEST_CASE("rational scalars") {
  CHECK(io::scalar_to_json(Q(3, 4)) == json("3/4"));
  CHECK(io::scalar_to_json(Q(-2)) == json(-2));
  CHECK(io::scalar_from_json<Q>(json("-3/6")) == Q(-1, 2));
  CHECK(io::scalar_from_json<F3>(json(5)) == F3(2));
  CHECK_THROWS_AS(io::scalar_from_json<F2>(json("1/2")), ParseError);
  CHECK_THROWS_AS(io::scalar_from_json<Q>(json("x")), ParseError);
}

TEST_CASE("groups, homs and intensional modules") {
  json g = {{"rank", 1}, {"invariants", {2}}};
  CHECK(io::to_json(io::group_from_json(g)) == g);
  CHECK_THROWS_AS(io::group_from_json(json{{"rank", 0}, {"invariants", {3, 2}}}), ParseError);
  auto psi = psi_ZZ2_Z();
  CHECK(io::hom_from_json(io::to_json(psi)) == psi);
  CHECK_THROWS_AS(io::hom_from_json(json{{"matrix", {{1}}}}, Z2(), Z()), ParseError);

  auto k = field_ring<F2>(Z());
  auto im = IntensionalFreeModule<F2>::subgroup_indexed(k, Subgroup::whole(Z()));
  json ji = io::to_json(im);
  CHECK(io::to_json(io::intensional_from_json<F2>(ji, k)) == ji);
  auto fin = IntensionalFreeModule<F2>::finite_degrees(k, {el(Z(), {0}), el(Z(), {1})});
  CHECK(io::to_json(io::intensional_from_json<F2>(io::to_json(fin), k)) == io::to_json(fin));
}

TEST_CASE("ring field mismatch is a parse error") {
  json j = io::to_json(dual_numbers_z2<F2>());
  CHECK_THROWS_AS(io::ring_from_json<F3>(j), ParseError);
  j.erase("one");
  CHECK_THROWS(io::ring_from_json<F2>(j));
}

TEST_CASE_TEMPLATE("Laurent certificates round-trip", F, F2, F3, Q) {
  auto c = laurent_counterexample<F>();
  json j = io::to_json(c);
  auto back = io::laurent_certificate_from_json<F>(j);
  CHECK(io::to_json(back).dump() == j.dump());
  CHECK(verify_laurent_steps(back).size() == 4);
}
