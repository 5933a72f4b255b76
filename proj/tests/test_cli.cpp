#include "doctest.h"

#include "gradlab/errors.hpp"
#include "scenario.hpp"

#include <fstream>

using gradlab::cli::json;
namespace cli = gradlab::cli;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(GRADLAB_SCENARIO_DIR) + "/" + name);
  REQUIRE(in);
  return json::parse(in);
}

}  // namespace

TEST_CASE("scenario exit codes") {
  CHECK(cli::run_scenario(load("group_algebra_z2.json"), {}).exit_code == cli::kOk);
  CHECK(cli::run_scenario(load("infinite_kernel.json"), {}).exit_code == cli::kOk);
  CHECK(cli::run_scenario(load("empty.json"), {}).exit_code == cli::kOk);
  CHECK(cli::run_scenario(load("expect_iso_wrong.json"), {}).exit_code == cli::kCheckFailed);
  CHECK_THROWS_AS(cli::run_scenario(load("unresolved.json"), {}), gradlab::ParseError);
}

TEST_CASE("malformed scenarios are parse errors") {
  CHECK_THROWS_AS(cli::run_scenario(json{{"version", 99}, {"checks", json::array()}}, {}), gradlab::ParseError);
  CHECK_THROWS_AS(cli::run_scenario(json{{"version", 1}, {"field", "F7"}, {"checks", json::array()}}, {}),
                  gradlab::Error);
  json bad_op = {{"version", 1}, {"checks", json::array({json{{"name", "x"}, {"op", "frobnicate"}}})}};
  CHECK_THROWS_AS(cli::run_scenario(bad_op, {}), gradlab::ParseError);
  json cyc = {{"version", 1},
              {"declarations", {{"modules", {{"A", {{"sum", {"B"}}}}, {"B", {{"sum", {"A"}}}}}}}},
              {"checks", json::array()}};
  CHECK_THROWS_AS(cli::run_scenario(cyc, {}), gradlab::ParseError);
}

TEST_CASE("results do not depend on the number of jobs") {
  for (const char* f : {"group_algebra_z2.json", "infinite_kernel.json"}) {
    const json s = load(f);
    const json one = cli::to_json(cli::run_scenario(s, {std::nullopt, std::nullopt, 1}), false);
    const json four = cli::to_json(cli::run_scenario(s, {std::nullopt, std::nullopt, 4}), false);
    CHECK(one == four);
    CHECK(one.dump() == cli::to_json(cli::run_scenario(s, {}), false).dump());
  }
}

TEST_CASE("json report shape") {
  const json r = cli::to_json(cli::run_scenario(load("group_algebra_z2.json"), {}), true);
  CHECK(r.at("schema_version") == cli::kSchemaVersion);
  CHECK(r.at("field") == "F2");
  CHECK(r.at("status") == "ok");
  REQUIRE(r.at("checks").size() == 9);
  for (const auto& c : r.at("checks")) {
    CHECK(c.contains("name"));
    CHECK(c.contains("verdict"));
    CHECK(c.contains("result"));
    CHECK(c.contains("duration_ms"));
  }
  const json reparsed = json::parse(r.dump());
  CHECK(reparsed == r);
  CHECK_FALSE(cli::to_json(cli::run_scenario(load("empty.json"), {}), false).at("checks").size());
}

TEST_CASE("field override") {
  json s = load("group_algebra_z2.json");
  const auto rep = cli::run_scenario(s, {std::string("F3"), std::nullopt, 1});
  CHECK(rep.field == "F3");
  // Over F3 the group algebra of Z/2 is semisimple; every check still has an answer.
  for (const auto& c : rep.checks) CHECK(c.verdict != "");
}

TEST_CASE("laurent certificate round trip") {
  for (const char* f : {"F2", "F3", "Q"}) {
    json cert = cli::laurent_certificate(f);
    std::vector<std::string> lines;
    CHECK(cli::verify_certificate(json::parse(cert.dump()), &lines));
    CHECK(lines.size() == 4);
    json tampered = cert;
    tampered["units"][0]["inverse"] = json::array({json::array({0, 1}), json::array({1, 1})});
    CHECK_FALSE(cli::verify_certificate(tampered));
  }
  CHECK_THROWS_AS(cli::verify_certificate(json{{"kind", "laurent"}}), gradlab::ParseError);
}

TEST_CASE("guard override reaches the ideal enumeration") {
  json s = {{"version", 1},
            {"field", "F3"},
            {"declarations",
             {{"rings", {{"T", {{"group", "Z"}, {"builder", "truncated_polynomial"}, {"t_degree", {0}}, {"n", 5}}}}},
              {"modules", {{"TR", {{"ring", "T"}, {"regular", true}}}}}}},
            {"checks", json::array({json{{"name", "baer"}, {"op", "injective-check"}, {"module", "TR"}}})}};
  auto small = cli::run_scenario(s, {});
  CHECK(small.checks.at(0).result.at("error") == "GuardExceeded");
  auto big = cli::run_scenario(s, {std::nullopt, 5L, 1});
  CHECK(big.checks.at(0).result.at("injective") == true);
}
