#pragma once

#include <functional>
#include <memory>
#include <string>

#include "rstscf/filter.hpp"
#include "rstscf/linalg.hpp"
#include "rstscf/rng.hpp"
#include "rstscf/tracking/scenario.hpp"
#include "rstscf/tracking/simulation.hpp"

namespace rstscf::tracking {

/// A recursive estimator driven one bearing at a time.
class Estimator {
 public:
  virtual ~Estimator() = default;
  /// Consumes the bearing of step k (1-based) and returns the state estimate.
  virtual Vector step(int k, double z) = 0;
};

/// Everything an estimator may use when it is created for one run.
struct RunContext {
  const ScenarioConfig& cfg;
  const RunRecord& run;
  Vector initial_estimate;
  RngStream rng;
};

using EstimatorFactory = std::function<std::unique_ptr<Estimator>(const RunContext&)>;

struct FilterEntry {
  std::string name;
  EstimatorFactory make;
};

/// Declarative filter choice: rule "sstsrcr", "stsrcr_det" or "mc" gives the robust
/// Student's t filter with that rule; rule "sir" gives the Gaussian stochastic
/// integration filter.
struct FilterSpec {
  std::string name;
  std::string rule;
  int samples = 100;
  bool shared_points = true;
};

/// Built-in filters: rstscf, sif, rstcf_det, rstmcf (sample counts from `cfg`).
/// Throws ConfigError for other names.
FilterSpec default_filter_spec(const std::string& name, const ScenarioConfig& cfg);

/// Throws ConfigError for an unknown rule or a non-positive sample count.
FilterEntry make_filter(const FilterSpec& spec, const ScenarioConfig& cfg);

/// Process and measurement models of the bearings-only scenario.
struct BearingsModel {
  Matrix transition;
  /// G * Sigma_w * G^T (rank 2).
  Matrix process_scale;
  Matrix measurement_scale;
};

BearingsModel make_bearings_model(const ScenarioConfig& cfg);

/// Bearing measurement function for step k whose atan2 branch cut sits opposite
/// `reference`: values lie in (reference - pi, reference + pi].
StateFunction bearing_function(const Eigen::Vector2d& platform, double reference);

/// Wrapped bearing residual.
Vector bearing_residual(const Vector& z, const Vector& z_pred);

}  // namespace rstscf::tracking
