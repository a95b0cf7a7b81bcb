#pragma once

#include <vector>

#include "rstscf/tracking/estimators.hpp"
#include "rstscf/tracking/metrics.hpp"
#include "rstscf/tracking/scenario.hpp"
#include "rstscf/tracking/simulation.hpp"

namespace rstscf::tracking {

struct MonteCarloOptions {
  /// Worker threads; 0 picks the available hardware concurrency.
  int workers = 0;
  /// Keep every RunRecord (truth, measurements, estimates) in the result.
  bool keep_runs = false;
};

struct MonteCarloResult {
  MetricsTable metrics;
  std::vector<RunRecord> runs;
};

/// Stream layout: run s simulates truth on (seed, s, "truth"), draws the initial estimate
/// x0^ ~ N(x0, P0) on (seed, s, "prior") and gives filter `name` the stream
/// (seed, s, "filter/<name>"). Every filter sees the same measurements and initial estimate.
///
/// A filter diverges on a run when it throws or produces a non-finite estimate; the run is
/// excluded from that filter's RMSE and counted in `diverged_runs`. Aggregation happens in
/// run order, independent of the worker count.
MonteCarloResult run_monte_carlo(const ScenarioConfig& cfg, const std::vector<FilterEntry>& filters,
                                 const MonteCarloOptions& options = {});

/// Runs the filters on a single pre-simulated run.
void run_filters(const ScenarioConfig& cfg, const std::vector<FilterEntry>& filters, int run_index,
                 RunRecord& run);

}  // namespace rstscf::tracking
