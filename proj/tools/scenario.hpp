#pragma once

// Scenario engine behind the gradlab command line: declarations of groups,
// homs, rings and modules plus an ordered list of checks, each producing a
// JSON result compared against optional expectations.

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradlab::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum Exit : int { kOk = 0, kCheckFailed = 1, kParseError = 2, kInternalError = 3 };

struct Options {
  /// Overrides the scenario's "field".
  std::optional<std::string> field;
  std::optional<long> guard;
  int jobs = 1;
};

struct CheckRecord {
  std::string name;
  std::string op;
  json inputs;
  std::string verdict;  // pass | fail | info
  std::string label;
  json result;
  json expected;
  double duration_ms = 0;
};

struct Report {
  std::string field;
  std::vector<CheckRecord> checks;
  int exit_code = kOk;
};

/// Raised for failures that indicate a bug rather than bad input.
class InternalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws gradlab::ParseError for malformed scenarios and InternalFailure
/// for soundness failures or unexpected exceptions.
Report run_scenario(const json& scenario, const Options& opt);

json to_json(const Report& r, bool timing = true);
std::string to_text(const Report& r);

/// Certificate for the Laurent counterexample; throws UnsupportedField.
json laurent_certificate(const std::string& field);
/// Re-checks a certificate from scratch. Throws ParseError on malformed input.
bool verify_certificate(const json& cert, std::vector<std::string>* lines = nullptr);

}  // namespace gradlab::cli
