#include "rstscf/tracking/scenario.hpp"

#include <cmath>
#include <numbers>

#include "rstscf/errors.hpp"

namespace rstscf::tracking {

namespace {

void check(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, std::string(key) + ": " + what);
}

void check_contamination(const Contamination& c, const char* p_key, const char* inflation_key) {
  check(c.probability >= 0.0 && c.probability <= 1.0, p_key, "probability must be in [0, 1]");
  check(c.inflation >= 1.0 && std::isfinite(c.inflation), inflation_key, "inflation must be >= 1");
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  check(cfg.dt_min > 0.0 && std::isfinite(cfg.dt_min), "dt", "must be positive");
  check(cfg.steps >= 1, "steps", "must be >= 1");
  check(cfg.sigma_w.rows() == 2 && cfg.sigma_w.cols() == 2, "sigma_w", "must be 2x2");
  check(cfg.sigma_w.allFinite() && asymmetry(cfg.sigma_w) <= 1e-12, "sigma_w", "must be symmetric");
  check(Eigen::LLT<Matrix>(cfg.sigma_w).info() == Eigen::Success, "sigma_w", "must be positive definite");
  check(cfg.sigma_v > 0.0 && std::isfinite(cfg.sigma_v), "sigma_v", "must be positive");
  check_contamination(cfg.process_contamination, "process_outlier_probability", "process_outlier_inflation");
  check_contamination(cfg.measurement_contamination, "measurement_outlier_probability",
                      "measurement_outlier_inflation");
  check(cfg.target.speed_knots >= 0.0, "target.speed_knots", "must be >= 0");
  check(cfg.platform.speed_knots >= 0.0, "platform.speed_knots", "must be >= 0");
  check(cfg.platform.manoeuvre_step >= 0, "platform.manoeuvre_step", "must be >= 0");
  check(cfg.prior_diag.size() == 4 && (cfg.prior_diag.array() > 0.0).all(), "prior.p0_diag",
        "must hold four positive entries");
  check(cfg.dof.process > 2.0, "nu1", "dof must be > 2");
  check(cfg.dof.measurement > 2.0, "nu2", "dof must be > 2");
  check(cfg.dof.filter > 2.0, "nu3", "dof must be > 2");
  check(cfg.samples >= 1, "samples", "must be >= 1");
  check(cfg.mc_samples >= 1, "mc_samples", "must be >= 1");
  check(cfg.runs >= 1, "runs", "must be >= 1");
}

std::pair<Matrix, Matrix> build_cwna_model(double dt) {
  if (!(dt > 0.0)) throw DomainError("build_cwna_model: dt must be positive");
  Matrix f = Matrix::Identity(4, 4);
  f(0, 2) = dt;
  f(1, 3) = dt;
  Matrix g = Matrix::Zero(4, 2);
  g(0, 0) = 0.5 * dt * dt;
  g(2, 0) = dt;
  g(1, 1) = 0.5 * dt * dt;
  g(3, 1) = dt;
  return {f, g};
}

double knots_to_km_per_min(double knots) { return knots * 1.852 / 60.0; }

Eigen::Vector2d course_velocity(double course_deg, double speed_km_per_min) {
  const double theta = course_deg * std::numbers::pi / 180.0;
  return speed_km_per_min * Eigen::Vector2d(std::sin(theta), std::cos(theta));
}

Eigen::Vector2d platform_position(int k, const ScenarioConfig& cfg) {
  const auto& p = cfg.platform;
  const double speed = knots_to_km_per_min(p.speed_knots);
  const Eigen::Vector2d before = course_velocity(p.initial_course_deg, speed) * cfg.dt_min;
  const Eigen::Vector2d after = course_velocity(p.final_course_deg, speed) * cfg.dt_min;
  const int legs_before = std::min(k, p.manoeuvre_step);
  const int legs_after = std::max(0, k - p.manoeuvre_step);
  return Eigen::Vector2d(p.x_km, p.y_km) + legs_before * before + legs_after * after;
}

Vector initial_target_state(const ScenarioConfig& cfg) {
  const Eigen::Vector2d v = course_velocity(cfg.target.course_deg, knots_to_km_per_min(cfg.target.speed_knots));
  Vector x(4);
  x << cfg.target.x_km, cfg.target.y_km, v.x(), v.y();
  return x;
}

}  // namespace rstscf::tracking
