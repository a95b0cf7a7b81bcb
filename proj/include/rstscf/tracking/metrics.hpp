#pragma once

#include <string>
#include <vector>

#include "rstscf/linalg.hpp"

namespace rstscf::tracking {

/// Per-step position and velocity RMSE over Monte Carlo runs.
struct RmseSeries {
  std::vector<double> pos;
  std::vector<double> vel;
};

/// RMSE_pos(k) = sqrt(1/M sum_s [(x - x^)^2 + (y - y^)^2]); velocity analogous on (vx, vy).
/// `truths[s][k]` and `estimates[s][k]` are 4-vectors. Throws LengthMismatch on ragged input.
RmseSeries rmse_series(const std::vector<std::vector<Vector>>& truths,
                       const std::vector<std::vector<Vector>>& estimates);

/// sqrt of the time average of series^2.
double armse(const std::vector<double>& rmse);

struct FilterMetrics {
  std::string name;
  RmseSeries rmse;
  double armse_pos = 0.0;
  double armse_vel = 0.0;
  /// Across-run standard errors of the ARMSEs (delta method on per-run mean squared errors).
  double armse_pos_se = 0.0;
  double armse_vel_se = 0.0;
  double mean_step_time_ms = 0.0;
  int diverged_runs = 0;
  int included_runs = 0;
  /// Per-run time-averaged squared errors of the included runs, in run order.
  std::vector<double> run_mse_pos;
  std::vector<double> run_mse_vel;
};

struct MetricsTable {
  int steps = 0;
  int runs = 0;
  std::vector<FilterMetrics> filters;

  const FilterMetrics& at(const std::string& name) const;
};

/// Standard error of sqrt(mean(e)) across runs: sd(e) / (sqrt(M) * 2 sqrt(mean(e))).
double armse_standard_error(const std::vector<double>& run_mse);

}  // namespace rstscf::tracking
