#pragma once

#include <string>
#include <vector>

#include "rstscf/linalg.hpp"
#include "rstscf/rng.hpp"
#include "rstscf/tracking/scenario.hpp"

namespace rstscf::tracking {

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

/// Full-circle bearing from the platform to the target position of state [x, y, ...].
double bearing(const Vector& state, const Eigen::Vector2d& platform);

/// Draw from N(0, sigma) with probability 1 - p and from N(0, inflation * sigma) with
/// probability p. `outlier`, when given, reports which component was drawn.
Vector sample_contaminated_noise(RngStream& rng, const SpdMatrix& sigma, double p, double inflation,
                                 bool* outlier = nullptr);

/// Estimates produced by one filter on one run.
struct FilterTrack {
  std::string name;
  /// Estimates for steps 1..T (shorter when the filter diverged).
  std::vector<Vector> estimates;
  std::vector<double> step_seconds;
  bool diverged = false;
  std::string divergence_reason;
};

/// One simulated run. `truth[k-1]` and `measurements[k-1]` belong to step k = 1..T.
struct RunRecord {
  Vector initial_state;
  std::vector<Vector> truth;
  std::vector<double> measurements;
  std::vector<FilterTrack> tracks;
};

/// Simulates the target with contaminated process noise and the contaminated bearing
/// measurements for steps 1..T. Zero noise matrices are allowed.
RunRecord simulate_truth(RngStream& rng, const ScenarioConfig& cfg);

}  // namespace rstscf::tracking
