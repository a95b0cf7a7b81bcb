#include <doctest.h>

#include <cmath>

#include "rstscf/errors.hpp"
#include "rstscf/tracking/estimators.hpp"
#include "rstscf/tracking/scenario.hpp"

using namespace rstscf;
using namespace rstscf::tracking;

namespace {

std::string error_key(const ScenarioConfig& cfg) {
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return {};
}

}  // namespace

TEST_CASE("constant velocity model matrices") {
  const auto [f, g] = build_cwna_model(1.0);
  CHECK(f.rows() == 4);
  CHECK(f.cols() == 4);
  CHECK(f(0, 2) == 1.0);
  CHECK(f(1, 3) == 1.0);
  CHECK(f(0, 0) == 1.0);
  CHECK(f(2, 0) == 0.0);
  CHECK(g.rows() == 4);
  CHECK(g.cols() == 2);
  CHECK(g(0, 0) == 0.5);
  CHECK(g(2, 0) == 1.0);
  CHECK(g(1, 1) == 0.5);
  CHECK(g(3, 1) == 1.0);
  CHECK(g(0, 1) == 0.0);

  const auto [f2, g2] = build_cwna_model(0.5);
  CHECK(f2(0, 2) == 0.5);
  CHECK(g2(0, 0) == 0.125);
  CHECK(g2(2, 0) == 0.5);
  CHECK_THROWS_AS(build_cwna_model(0.0), DomainError);
}

TEST_CASE("unit conversions and courses") {
  CHECK(knots_to_km_per_min(180.0) == doctest::Approx(5.556).epsilon(1e-12));
  CHECK(knots_to_km_per_min(50.0) == doctest::Approx(1.5433333333333334).epsilon(1e-12));
  const Eigen::Vector2d north = course_velocity(0.0, 2.0);
  CHECK(north.x() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(north.y() == doctest::Approx(2.0));
  const Eigen::Vector2d east = course_velocity(90.0, 2.0);
  CHECK(east.x() == doctest::Approx(2.0));
  CHECK(std::abs(east.y()) <= 1e-15);
}

TEST_CASE("initial target state") {
  const ScenarioConfig cfg;
  const Vector x0 = initial_target_state(cfg);
  CHECK(x0(0) == 3.0);
  CHECK(x0(1) == 3.0);
  CHECK(x0.tail(2).norm() == doctest::Approx(5.556).epsilon(1e-12));
  // Course -135.4 degrees heads south-west.
  CHECK(x0(2) < 0.0);
  CHECK(x0(3) < 0.0);
}

TEST_CASE("platform trajectory") {
  const ScenarioConfig cfg;
  CHECK(platform_position(0, cfg).norm() == 0.0);
  const double leg = knots_to_km_per_min(50.0) * cfg.dt_min;
  CHECK(platform_position(1, cfg).norm() == doctest::Approx(leg).epsilon(1e-12));
  for (int k = 1; k <= cfg.steps; ++k) {
    CHECK((platform_position(k, cfg) - platform_position(k - 1, cfg)).norm() == doctest::Approx(leg).epsilon(1e-12));
  }
  const Eigen::Vector2d before = platform_position(cfg.platform.manoeuvre_step, cfg) -
                                 platform_position(cfg.platform.manoeuvre_step - 1, cfg);
  const Eigen::Vector2d after = platform_position(cfg.platform.manoeuvre_step + 1, cfg) -
                                platform_position(cfg.platform.manoeuvre_step, cfg);
  CHECK((before - course_velocity(-80.0, leg)).norm() <= 1e-12);
  CHECK((after - course_velocity(146.0, leg)).norm() <= 1e-12);
}

TEST_CASE("bearings model") {
  const ScenarioConfig cfg;
  const BearingsModel model = make_bearings_model(cfg);
  const auto [f, g] = build_cwna_model(cfg.dt_min);
  CHECK(model.transition == f);
  CHECK((model.process_scale - g * cfg.sigma_w * g.transpose()).norm() <= 1e-18);
  CHECK(model.measurement_scale.rows() == 1);
  CHECK(model.measurement_scale(0, 0) == doctest::Approx(4e-4));
}

TEST_CASE("validation names the offending key") {
  CHECK(error_key(ScenarioConfig{}).empty());
  auto with = [](auto edit) {
    ScenarioConfig cfg;
    edit(cfg);
    return error_key(cfg);
  };
  CHECK(with([](ScenarioConfig& c) { c.dt_min = 0.0; }) == "dt");
  CHECK(with([](ScenarioConfig& c) { c.steps = 0; }) == "steps");
  CHECK(with([](ScenarioConfig& c) { c.sigma_v = -1.0; }) == "sigma_v");
  CHECK(with([](ScenarioConfig& c) { c.sigma_w(0, 1) = 0.5; }) == "sigma_w");
  CHECK(with([](ScenarioConfig& c) { c.process_contamination.probability = 1.5; }) ==
        "process_outlier_probability");
  CHECK(with([](ScenarioConfig& c) { c.measurement_contamination.inflation = 0.5; }) ==
        "measurement_outlier_inflation");
  CHECK(with([](ScenarioConfig& c) { c.dof.process = 2.0; }) == "nu1");
  CHECK(with([](ScenarioConfig& c) { c.dof.measurement = 1.0; }) == "nu2");
  CHECK(with([](ScenarioConfig& c) { c.dof.filter = 2.0; }) == "nu3");
  CHECK(with([](ScenarioConfig& c) { c.samples = 0; }) == "samples");
  CHECK(with([](ScenarioConfig& c) { c.runs = 0; }) == "runs");
  CHECK(with([](ScenarioConfig& c) { c.prior_diag(2) = 0.0; }) == "prior.p0_diag");
}

TEST_CASE("filter specifications") {
  const ScenarioConfig cfg;
  CHECK(default_filter_spec("rstscf", cfg).rule == "sstsrcr");
  CHECK(default_filter_spec("rstscf", cfg).samples == 100);
  CHECK(default_filter_spec("sif", cfg).rule == "sir");
  CHECK(default_filter_spec("rstcf_det", cfg).rule == "stsrcr_det");
  CHECK(default_filter_spec("rstmcf", cfg).samples == 10000);
  CHECK_THROWS_AS(default_filter_spec("ukf", cfg), ConfigError);
  CHECK_THROWS_AS(make_filter({"x", "simpson", 10, true}, cfg), ConfigError);
  CHECK_THROWS_AS(make_filter({"x", "sstsrcr", 0, true}, cfg), ConfigError);
}
