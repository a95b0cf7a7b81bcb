#include "rstscf/tracking/simulation.hpp"

#include <cmath>
#include <numbers>

#include "rstscf/errors.hpp"
#include "rstscf/sampling.hpp"

namespace rstscf::tracking {

namespace {

// Square root of a symmetric PSD matrix (zero matrices allowed).
Matrix psd_sqrt(const Matrix& m) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(m));
  const Vector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal();
}

Vector contaminated_draw(RngStream& rng, const Matrix& root, double p, double inflation, bool* outlier) {
  const bool is_outlier = rng.uniform() < p;
  if (outlier != nullptr) *outlier = is_outlier;
  const Vector z = sample_standard_normal_vector(rng, root.cols());
  const double gain = is_outlier ? std::sqrt(inflation) : 1.0;
  return gain * (root * z);
}

}  // namespace

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

double bearing(const Vector& state, const Eigen::Vector2d& platform) {
  return std::atan2(state(1) - platform.y(), state(0) - platform.x());
}

Vector sample_contaminated_noise(RngStream& rng, const SpdMatrix& sigma, double p, double inflation, bool* outlier) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample_contaminated_noise: probability must be in [0, 1]");
  return contaminated_draw(rng, sigma.sqrt(), p, inflation, outlier);
}

RunRecord simulate_truth(RngStream& rng, const ScenarioConfig& cfg) {
  const auto [f, g] = build_cwna_model(cfg.dt_min);
  const Matrix process_root = psd_sqrt(cfg.sigma_w);
  const Matrix measurement_root = Matrix::Constant(1, 1, std::sqrt(std::max(cfg.sigma_v, 0.0)));

  RunRecord run;
  run.initial_state = initial_target_state(cfg);
  run.truth.reserve(static_cast<std::size_t>(cfg.steps));
  run.measurements.reserve(static_cast<std::size_t>(cfg.steps));

  Vector x = run.initial_state;
  for (int k = 1; k <= cfg.steps; ++k) {
    const Vector w = contaminated_draw(rng, process_root, cfg.process_contamination.probability,
                                       cfg.process_contamination.inflation, nullptr);
    x = f * x + g * w;
    const Vector v = contaminated_draw(rng, measurement_root, cfg.measurement_contamination.probability,
                                       cfg.measurement_contamination.inflation, nullptr);
    run.truth.push_back(x);
    run.measurements.push_back(wrap_angle(bearing(x, platform_position(k, cfg)) + v(0)));
  }
  return run;
}

}  // namespace rstscf::tracking
