#include "rstscf/tracking/estimators.hpp"

#include <cmath>

#include "rstscf/errors.hpp"

namespace rstscf::tracking {

namespace {

Matrix prior_matrix(const ScenarioConfig& cfg) { return cfg.prior_diag.asDiagonal(); }

class StudentTFilterEstimator final : public Estimator {
 public:
  StudentTFilterEstimator(const RunContext& ctx, std::unique_ptr<StudentTRule> rule, FilterOptions options)
      : cfg_(ctx.cfg),
        model_(make_bearings_model(ctx.cfg)),
        process_(model_.process_scale, ctx.cfg.dof.process),
        measurement_(model_.measurement_scale, ctx.cfg.dof.measurement),
        rule_(std::move(rule)),
        options_(options),
        rng_(ctx.rng),
        // The initial error covariance doubles as the prior scale matrix.
        state_{ctx.initial_estimate, prior_matrix(ctx.cfg), ctx.cfg.dof.filter} {}

  Vector step(int k, double z) override {
    const Matrix& f = model_.transition;
    const StateEstimate predicted =
        time_update(state_, [&f](const Vector& x) -> Vector { return f * x; }, process_, *rule_, rng_, options_);
    const Eigen::Vector2d platform = platform_position(k, cfg_);
    const auto h = bearing_function(platform, bearing(predicted.mean, platform));
    state_ = measurement_update(predicted, Vector::Constant(1, z), h, bearing_residual, measurement_, *rule_, rng_,
                                options_)
                 .first;
    return state_.mean;
  }

 private:
  const ScenarioConfig& cfg_;
  BearingsModel model_;
  NoiseSpec process_;
  NoiseSpec measurement_;
  std::unique_ptr<StudentTRule> rule_;
  FilterOptions options_;
  RngStream rng_;
  StateEstimate state_;
};

class SifEstimator final : public Estimator {
 public:
  SifEstimator(const RunContext& ctx, int samples, FilterOptions options)
      : cfg_(ctx.cfg),
        model_(make_bearings_model(ctx.cfg)),
        rule_(samples),
        options_(options),
        rng_(ctx.rng),
        state_{ctx.initial_estimate, prior_matrix(ctx.cfg)} {}

  Vector step(int k, double z) override {
    const Matrix& f = model_.transition;
    const GaussianEstimate predicted = gaussian_time_update(
        state_, [&f](const Vector& x) -> Vector { return f * x; }, model_.process_scale, rule_, rng_, options_);
    const Eigen::Vector2d platform = platform_position(k, cfg_);
    const auto h = bearing_function(platform, bearing(predicted.mean, platform));
    state_ = gaussian_measurement_update(predicted, Vector::Constant(1, z), h, bearing_residual,
                                         model_.measurement_scale, rule_, rng_, options_)
                 .first;
    return state_.mean;
  }

 private:
  const ScenarioConfig& cfg_;
  BearingsModel model_;
  SirRule rule_;
  FilterOptions options_;
  RngStream rng_;
  GaussianEstimate state_;
};

}  // namespace

BearingsModel make_bearings_model(const ScenarioConfig& cfg) {
  const auto [f, g] = build_cwna_model(cfg.dt_min);
  BearingsModel model;
  model.transition = f;
  model.process_scale = symmetrize(g * cfg.sigma_w * g.transpose());
  model.measurement_scale = Matrix::Constant(1, 1, cfg.sigma_v);
  return model;
}

StateFunction bearing_function(const Eigen::Vector2d& platform, double reference) {
  return [platform, reference](const Vector& x) -> Vector {
    return Vector::Constant(1, reference + wrap_angle(bearing(x, platform) - reference));
  };
}

Vector bearing_residual(const Vector& z, const Vector& z_pred) {
  Vector r(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) r(i) = wrap_angle(z(i) - z_pred(i));
  return r;
}

FilterSpec default_filter_spec(const std::string& name, const ScenarioConfig& cfg) {
  if (name == "rstscf") return {name, "sstsrcr", cfg.samples, true};
  if (name == "sif") return {name, "sir", cfg.samples, true};
  if (name == "rstcf_det") return {name, "stsrcr_det", 1, true};
  if (name == "rstmcf") return {name, "mc", cfg.mc_samples, true};
  throw ConfigError("filters", "unknown filter '" + name + "' (expected rstscf, sif, rstcf_det or rstmcf)");
}

FilterEntry make_filter(const FilterSpec& spec, const ScenarioConfig&) {
  if (spec.samples < 1) throw ConfigError(spec.name + ".samples", "sample count must be >= 1");
  const FilterOptions options{spec.shared_points};
  if (spec.rule == "sir") {
    const int samples = spec.samples;
    return {spec.name, [samples, options](const RunContext& ctx) -> std::unique_ptr<Estimator> {
              return std::make_unique<SifEstimator>(ctx, samples, options);
            }};
  }
  if (spec.rule != "sstsrcr" && spec.rule != "stsrcr_det" && spec.rule != "mc") {
    throw ConfigError(spec.name + ".rule", "unknown rule '" + spec.rule + "' (expected sstsrcr, stsrcr_det, mc, sir)");
  }
  const std::string rule = spec.rule;
  const int samples = spec.samples;
  return {spec.name, [rule, samples, options](const RunContext& ctx) -> std::unique_ptr<Estimator> {
            return std::make_unique<StudentTFilterEstimator>(ctx, make_student_t_rule(rule, samples), options);
          }};
}

}  // namespace rstscf::tracking
