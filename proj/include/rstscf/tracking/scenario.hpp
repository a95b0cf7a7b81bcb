#pragma once

#include <cstdint>
#include <utility>

#include "rstscf/linalg.hpp"

namespace rstscf::tracking {

struct Contamination {
  double probability = 0.05;
  double inflation = 100.0;
};

/// Straight-line mover. Courses are compass style: degrees clockwise from +y (north),
/// velocity = speed * (sin course, cos course).
struct TargetSpec {
  double x_km = 3.0;
  double y_km = 3.0;
  double speed_knots = 180.0;
  double course_deg = -135.4;
};

/// Observer platform with one instantaneous course change.
struct PlatformSpec {
  double x_km = 0.0;
  double y_km = 0.0;
  double speed_knots = 50.0;
  double initial_course_deg = -80.0;
  double final_course_deg = 146.0;
  /// First step whose leg uses the final course.
  int manoeuvre_step = 15;
};

struct DofSpec {
  double process = 5.0;      // nu1
  double measurement = 5.0;  // nu2
  double filter = 5.0;       // nu3
};

/// Every constant of the manoeuvring bearings-only benchmark. Defaults reproduce the
/// published setup.
struct ScenarioConfig {
  double dt_min = 1.0;
  int steps = 100;
  /// Nominal process noise covariance, km^2/min^2 (2x2).
  Matrix sigma_w = 1e-6 * Matrix::Identity(2, 2);
  /// Nominal bearing noise variance, rad^2.
  double sigma_v = 0.02 * 0.02;
  Contamination process_contamination{0.05, 100.0};
  Contamination measurement_contamination{0.05, 50.0};
  TargetSpec target;
  PlatformSpec platform;
  /// Initial estimation error covariance (also the prior scale matrix), km^2 and km^2/min^2.
  Vector prior_diag = (Vector(4) << 16.0, 16.0, 4.0, 4.0).finished();
  DofSpec dof;
  /// Stochastic rule sample count N.
  int samples = 100;
  /// Sample count of the Monte Carlo rule baseline.
  int mc_samples = 10000;
  /// Monte Carlo runs M.
  int runs = 1000;
  std::uint64_t seed = 20170101;
};

/// Throws ConfigError naming the offending key.
void validate(const ScenarioConfig& cfg);

/// F = [[I, dt I], [0, I]] (4x4) and G = blockdiag-style noise gain (4x2) for the
/// continuous white noise acceleration model with state [x, y, vx, vy].
std::pair<Matrix, Matrix> build_cwna_model(double dt);

double knots_to_km_per_min(double knots);

/// Compass course (deg) and speed (km/min) to a (vx, vy) velocity.
Eigen::Vector2d course_velocity(double course_deg, double speed_km_per_min);

/// Platform position at step k (k = 0 is the initial position).
Eigen::Vector2d platform_position(int k, const ScenarioConfig& cfg);

/// Initial true state [x, y, vx, vy].
Vector initial_target_state(const ScenarioConfig& cfg);

}  // namespace rstscf::tracking
