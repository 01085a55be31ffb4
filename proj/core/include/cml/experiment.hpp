#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cml {

inline constexpr std::string_view kVersion = "0.1.0";

using ParamValue = std::variant<bool, std::int64_t, double, std::string,
                                std::vector<double>, std::vector<std::int64_t>>;
using ParamMap = std::map<std::string, ParamValue, std::less<>>;

/// Declarative run configuration. JSON shape:
///   {"experiment": "...", "seed": 123, "params": {...}, "output_dir": "..."}
/// Stochastic experiments require a seed; there is no default. Unknown
/// experiment names, unknown params, wrong types, and out-of-range values
/// are all rejected before anything is computed or written.
struct ExperimentSpec {
  std::string experiment;
  std::optional<std::uint64_t> seed;
  ParamMap params;
  std::string output_dir;  // empty: nothing is written
};

struct ExperimentResult {
  /// Single JSON document with stable key ordering: spec echo, artifact
  /// version, and the experiment's summary metrics.
  std::string summary_json;
  /// Table name (without extension) -> CSV payload.
  std::map<std::string, std::string> tables;
  /// Scalar metrics, also present inside summary_json.
  std::map<std::string, double> metrics;
};

const std::vector<std::string>& experiment_names();

ExperimentSpec parse_spec_json(std::string_view text);

/// Full validation; throws ConfigError with a message naming the offender.
void validate_spec(const ExperimentSpec& spec);

/// Validates, dispatches to the owning module, writes summary.json plus the
/// experiment tables into output_dir (when set), and returns the result.
/// Identical specs produce byte-identical output, for any CML_THREADS.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct CriterionCheck {
  int criterion = 0;        // 1..11
  std::string name;         // e.g. "malus", "chsh.classical"
  double measured = 0.0;
  double bound = 0.0;
  std::string comparison;   // "<", "<=", "==", ">"
  bool passed = false;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Criteria to run; empty means all of 1..11.
  std::vector<int> only;
  /// Self-test hook: corrupts the bounds so every check must fail.
  bool corrupt_tolerance = false;
};

struct AcceptanceReport {
  std::vector<CriterionCheck> checks;
  bool all_passed = false;
};

/// Runs the acceptance criteria with their pinned seeds and tolerances,
/// printing one pass/fail line per check and writing acceptance.csv and
/// acceptance.json under output_dir (when set).
AcceptanceReport run_acceptance_suite(const std::string& output_dir,
                                      const AcceptanceOptions& options = {});

}  // namespace cml
