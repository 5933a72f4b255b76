#include "scenario.hpp"

#include "gradlab/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using gradlab::cli::json;
namespace cli = gradlab::cli;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gradlab::ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw gradlab::ParseError(path + ": " + e.what());
  }
}

json parse_inline(const std::string& what, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw gradlab::ParseError(what + ": " + e.what());
  }
}

struct Common {
  std::string format = "text";
  std::optional<std::string> field;
  std::optional<long> guard;
  int jobs = 1;
  bool no_timing = false;

  void attach(CLI::App* app) {
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app->add_option("--field", field, "Coefficient field: F2, F3 or Q");
    app->add_option("--guard-dim", guard, "Largest ring dimension for exhaustive enumeration");
    app->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    app->add_flag("--no-timing", no_timing, "Omit durations from JSON output");
  }
  cli::Options options() const { return {field, guard, jobs}; }
};

/// Named inputs of a single-check verb; each maps to the check parameter of
/// the same name.
struct CheckArgs {
  std::string file;
  std::map<std::string, std::string> names;
  std::vector<std::string> family;
  std::vector<std::string> psi_list;
  std::vector<std::string> tests;
  std::optional<std::string> subgroup;
  std::optional<std::string> expect;
  std::optional<long> radius;

  void attach(CLI::App* app, const std::vector<std::string>& keys) {
    app->add_option("file", file, "Declarations or scenario JSON")->required()->check(CLI::ExistingFile);
    for (const auto& k : keys) {
      if (k == "family") {
        app->add_option("--family", family, "Family members (module names)");
      } else if (k == "psi_list") {
        app->add_option("--psi-list", psi_list, "Epimorphisms to test");
      } else if (k == "tests") {
        app->add_option("--test-module", tests, "Test modules N for h_psi(M, N)");
      } else if (k == "subgroup") {
        app->add_option("--subgroup", subgroup, "Subgroup generators as JSON, e.g. [[1]]");
      } else if (k == "radius") {
        app->add_option("--radius", radius, "Window radius in the kernel");
      } else {
        std::string flag = "--" + k;
        for (auto& c : flag)
          if (c == '_') c = '-';
        app->add_option(flag, names[k], "Name of the " + k);
      }
    }
    app->add_option("--expect", expect, "Expected result fields as JSON");
  }

  json scenario(const std::string& op) const {
    json doc = read_json(file);
    json s = doc.contains("declarations") ? doc : json{{"declarations", doc}};
    json check = {{"op", op}, {"name", op}};
    for (const auto& [k, v] : names)
      if (!v.empty()) check[k] = v;
    if (!family.empty()) check["family"] = family;
    if (!psi_list.empty()) check["psi_list"] = psi_list;
    if (!tests.empty()) check["tests"] = tests;
    if (subgroup) check["subgroup"] = parse_inline("--subgroup", *subgroup);
    if (radius) check["radius"] = *radius;
    if (expect) check["expect"] = parse_inline("--expect", *expect);
    s["checks"] = json::array({check});
    return s;
  }
};

int emit(const cli::Report& rep, const Common& common) {
  if (common.format == "json") {
    std::cout << cli::to_json(rep, !common.no_timing).dump(2) << "\n";
  } else {
    std::cout << cli::to_text(rep);
  }
  return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradlab: graded rings and modules, coarsening and refinement"};
  app.require_subcommand(1);
  Common common;

  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string scenario_path;
  run->add_option("scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  common.attach(run);

  struct Verb {
    const char* name;
    const char* help;
    std::vector<std::string> keys;
  };
  const std::vector<Verb> verbs = {
      {"validate", "Check ring and module axioms (all declarations when none is named)", {"ring", "module"}},
      {"coarsen", "Coarsen a ring or module along psi", {"ring", "module", "psi"}},
      {"refine", "Refine a module (over --ring) or a ring along psi", {"ring", "module", "psi", "radius"}},
      {"decomposition", "Refine then coarsen: compare with |ker psi| copies", {"ring", "module", "psi"}},
      {"adjunction-check", "Check an adjunction between coarsening and refinement", {"kind", "source", "target", "psi"}},
      {"product-defect", "Compare coarsening of a product with the product of coarsenings", {"family", "intensional", "ring", "psi"}},
      {"graded-hom", "Compute the graded Hom module", {"source", "target"}},
      {"hpsi-check", "Compute h_psi and compare with the prediction", {"source", "target", "psi", "rule"}},
      {"small-check", "Smallness and its behaviour under coarsening", {"module", "intensional", "opaque", "psi", "relative_to"}},
      {"cor280", "From h_pi iso for an infinite subgroup to h_psi iso for all psi", {"module", "intensional", "subgroup", "psi_list", "tests"}},
      {"injective-check", "Graded Baer criterion, optionally with coarsening transfer", {"module", "psi"}},
      {"cogenerator-check", "Test whether a module is a cogenerator", {"module"}},
  };
  std::map<std::string, CheckArgs> verb_args;
  std::map<std::string, CLI::App*> verb_apps;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    verb_args[v.name].attach(sub, v.keys);
    common.attach(sub);
    verb_apps[v.name] = sub;
  }

  auto* counter = app.add_subcommand("counterexample", "Emit a certified counterexample");
  std::string which;
  counter->add_option("which", which, "Counterexample name")->required()->check(CLI::IsMember({"laurent"}));
  common.attach(counter);

  auto* verify = app.add_subcommand("verify", "Re-check a certificate from scratch");
  std::string cert_path;
  verify->add_option("certificate", cert_path, "Certificate JSON")->required()->check(CLI::ExistingFile);
  common.attach(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kParseError;
  }

  try {
    if (*run) return emit(cli::run_scenario(read_json(scenario_path), common.options()), common);

    for (const auto& [name, sub] : verb_apps) {
      if (!*sub) continue;
      json s = verb_args[name].scenario(name);
      if (name == "validate" && verb_args[name].names["ring"].empty() && verb_args[name].names["module"].empty()) {
        // Every declared ring and module.
        json checks = json::array();
        const json& d = s["declarations"];
        for (const char* sec : {"rings", "modules"}) {
          if (!d.contains(sec)) continue;
          for (const auto& [n, v] : d.at(sec).items())
            checks.push_back({{"op", "validate"}, {"name", std::string(sec) + "/" + n},
                              {sec == std::string("rings") ? "ring" : "module", n}, {"expect", {{"valid", true}}}});
        }
        s["checks"] = checks;
      }
      return emit(cli::run_scenario(s, common.options()), common);
    }

    if (*counter) {
      json cert = cli::laurent_certificate(common.field.value_or("F2"));
      if (common.format == "json") {
        std::cout << cert.dump(2) << "\n";
      } else {
        for (const auto& s : cert.at("steps"))
          std::cout << (s.at("holds").get<bool>() ? "ok    " : "FAIL  ") << s.at("id").get<std::string>() << ": "
                    << s.at("claim").get<std::string>() << "\n";
      }
      return cli::kOk;
    }

    if (*verify) {
      std::vector<std::string> lines;
      const bool ok = cli::verify_certificate(read_json(cert_path), &lines);
      if (common.format == "json") {
        std::cout << json{{"schema_version", cli::kSchemaVersion}, {"valid", ok}, {"steps", lines}}.dump(2) << "\n";
      } else {
        for (const auto& l : lines) std::cout << l << "\n";
        std::cout << (ok ? "certificate valid" : "certificate INVALID") << "\n";
      }
      return ok ? cli::kOk : cli::kCheckFailed;
    }
  } catch (const gradlab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return cli::kParseError;
  } catch (const gradlab::UnsupportedField& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kParseError;
  } catch (const cli::InternalFailure& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return cli::kInternalError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return cli::kInternalError;
  }
  return cli::kInternalError;
}
