#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rstscf/tracking/estimators.hpp"
#include "rstscf/tracking/metrics.hpp"
#include "rstscf/tracking/scenario.hpp"

namespace rstscf::cli {

inline const std::vector<std::string> kDefaultFilters = {"rstscf", "sif", "rstcf_det", "rstmcf"};

struct CustomFilter {
  std::string name;
  std::string rule;
  /// Empty: the scenario sample count (the Monte Carlo sample count for rule "mc").
  std::optional<int> samples;
  bool shared_points = true;
};

/// Everything a `run` invocation needs: the scenario, the filters to compare and where the
/// tables go.
struct ExperimentSpec {
  tracking::ScenarioConfig scenario;
  /// Filters to compare, in output order.
  std::vector<std::string> filters = kDefaultFilters;
  /// Definitions from [filter:NAME] sections. Names not listed here use the built-ins.
  std::vector<CustomFilter> custom_filters;
  std::filesystem::path out_dir = "results";
  /// When false the timing column is written as NA, which keeps summary.csv reproducible.
  bool timing = true;
  int workers = 0;
};

/// Built-in defaults (the published benchmark) with the four default filters.
ExperimentSpec default_experiment();

/// Reads an INI experiment file. Every scenario key must be present; a missing or malformed
/// key raises ConfigError naming it.
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// Command-line overrides applied after the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> samples;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<std::vector<std::string>> filters;
  bool no_timing = false;
};

/// Applies overrides and re-validates. `--samples` changes the scenario sample count, which
/// every filter without an explicit sample count follows.
void apply_overrides(ExperimentSpec& spec, const Overrides& overrides);

/// Resolves filter names to specs. Throws ConfigError for duplicates or unknown names.
std::vector<tracking::FilterSpec> resolve_filters(const ExperimentSpec& spec);

std::string summary_csv(const tracking::MetricsTable& table, bool timing);
std::string series_csv(const tracking::MetricsTable& table);

/// Entry point of the `rstscf` tool. Returns 0 on success, 1 on a runtime or property
/// failure and 2 on a configuration or usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rstscf::cli
