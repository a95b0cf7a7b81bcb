#include "rstscf/filter.hpp"

#include <cmath>

#include "rstscf/errors.hpp"

namespace rstscf {

namespace {

constexpr double kJitterScale = 1e-9;

void require_filter_dof(double dof, const char* who) {
  if (!(dof > 2.0)) throw DofTooSmall(std::string(who) + ": dof must be > 2");
}

// Evaluates fn at every column of `points` into the columns of the result.
Matrix evaluate_columns(const StateFunction& fn, const Matrix& points) {
  Matrix values;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const Vector y = fn(points.col(j));
    if (!y.allFinite()) throw NonFiniteIntegrand("model function returned a non-finite value");
    if (j == 0) values.resize(y.size(), points.cols());
    values.col(j) = y;
  }
  return values;
}

// rule[y u^T] - cy cu^T, accumulated around the centres cy and cu to avoid cancellation.
// Algebraically identical to the raw second moment minus cy cu^T for any weights summing to one.
Matrix shifted_cross_moment(const Vector& weights, const Matrix& y, const Matrix& u, const Vector& cy,
                            const Vector& cu) {
  const Matrix dy = y.colwise() - cy;
  const Matrix du = u.colwise() - cu;
  const Vector my = y * weights;
  const Vector mu = u * weights;
  return dy * weights.asDiagonal() * du.transpose() + cy * (mu - cu).transpose() + (my - cy) * cu.transpose();
}

struct FactorizedInnovation {
  Matrix pzz;
  Matrix lower;
  bool jittered = false;
};

FactorizedInnovation factorize_innovation(const Matrix& pzz_raw) {
  FactorizedInnovation out{symmetrize(pzz_raw), Matrix(), false};
  try {
    out.lower = cholesky_sqrt(out.pzz);
    return out;
  } catch (const NotPositiveDefinite&) {
  }
  const double m = static_cast<double>(out.pzz.rows());
  const double jitter = kJitterScale * out.pzz.trace() / m;
  out.pzz += std::max(jitter, 0.0) * Matrix::Identity(out.pzz.rows(), out.pzz.cols());
  out.jittered = true;
  try {
    out.lower = cholesky_sqrt(out.pzz);
  } catch (const NotPositiveDefinite&) {
    throw InnovationCovarianceNotPD("predicted measurement scale matrix is not positive definite");
  }
  return out;
}

// Shared tail of both measurement updates: Delta^2, gain, corrected mean and the
// un-scaled posterior matrix P - K Pzz K^T.
struct GainResult {
  Vector mean;
  Matrix reduced;
  MeasurementUpdateReport report;
};

GainResult apply_gain(const Vector& prior_mean, const Matrix& prior_matrix, const Vector& z, const Vector& z_pred,
                      const Matrix& pzz_raw, const Matrix& pxz, const ResidualFunction& residual) {
  const FactorizedInnovation innovation = factorize_innovation(pzz_raw);
  const Vector r = residual(z, z_pred);
  if (r.size() != z_pred.size() || !r.allFinite()) throw NonFiniteIntegrand("residual is non-finite or mis-sized");

  const auto lower = innovation.lower.triangularView<Eigen::Lower>();
  const Vector whitened = lower.solve(r);
  // K^T = Pzz^-1 Pxz^T via two triangular solves.
  const Matrix gain_t = lower.transpose().solve(lower.solve(pxz.transpose()));
  const Matrix gain = gain_t.transpose();

  GainResult out;
  out.mean = prior_mean + gain * r;
  out.reduced = prior_matrix - gain * innovation.pzz * gain.transpose();
  out.report.z_pred = z_pred;
  out.report.pzz = innovation.pzz;
  out.report.pxz = pxz;
  out.report.gain = gain;
  out.report.delta_squared = whitened.squaredNorm();
  out.report.jitter_applied = innovation.jittered;
  return out;
}

StudentTDensity density_of(const StateEstimate& state) {
  return StudentTDensity(state.mean, SpdMatrix(symmetrize(state.scale)), state.dof);
}

}  // namespace

NoiseSpec::NoiseSpec(Matrix scale_in, double dof_in) : scale(std::move(scale_in)), dof(dof_in) {
  require_filter_dof(dof, "NoiseSpec");
  if (scale.rows() != scale.cols() || scale.rows() == 0) throw DomainError("NoiseSpec: scale must be square");
  if (!scale.allFinite()) throw DomainError("NoiseSpec: scale has non-finite entries");
  if (asymmetry(scale) > 1e-12) throw DomainError("NoiseSpec: scale is not symmetric");
  scale = symmetrize(scale);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(scale, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, scale.norm())) {
    throw NotPositiveDefinite("NoiseSpec: scale is not positive semi-definite");
  }
}

Vector subtract_residual(const Vector& z, const Vector& z_pred) { return z - z_pred; }

StateEstimate validate_estimate(StateEstimate state) {
  state.scale = symmetrize(state.scale);
  if (!state.mean.allFinite()) throw NotPositiveDefinite("estimate mean is non-finite");
  cholesky_sqrt(state.scale);
  return state;
}

GaussianEstimate validate_estimate(GaussianEstimate state) {
  state.cov = symmetrize(state.cov);
  if (!state.mean.allFinite()) throw NotPositiveDefinite("estimate mean is non-finite");
  cholesky_sqrt(state.cov);
  return state;
}

StateEstimate time_update(const StateEstimate& state, const StateFunction& f, const NoiseSpec& process,
                          const StudentTRule& rule, RngStream& rng, const FilterOptions& options) {
  require_filter_dof(state.dof, "time_update");
  const double nu3 = state.dof;
  const double nu1 = process.dof;
  const StudentTDensity density = density_of(state);

  const CubaturePointSet set = rule.draw(density, rng);
  Matrix values = evaluate_columns(f, set.points);
  const Vector mean = values * set.weights;

  Matrix second;
  if (options.shared_points) {
    second = shifted_cross_moment(set.weights, values, values, mean, mean);
  } else {
    const CubaturePointSet second_set = rule.draw(density, rng);
    values = evaluate_columns(f, second_set.points);
    second = shifted_cross_moment(second_set.weights, values, values, mean, mean);
  }
  if (process.scale.rows() != mean.size()) throw DomainError("time_update: process noise dimension mismatch");

  const double ratio = (nu3 - 2.0) / nu3;
  const double noise_factor = nu1 * (nu3 - 2.0) / ((nu1 - 2.0) * nu3);
  return validate_estimate(StateEstimate{mean, ratio * second + noise_factor * process.scale, nu3});
}

std::pair<StateEstimate, MeasurementUpdateReport> measurement_update(
    const StateEstimate& predicted, const Vector& z, const StateFunction& h, const ResidualFunction& residual,
    const NoiseSpec& measurement, const StudentTRule& rule, RngStream& rng, const FilterOptions& options) {
  require_filter_dof(predicted.dof, "measurement_update");
  const double nu3 = predicted.dof;
  const double nu2 = measurement.dof;
  const StudentTDensity density = density_of(predicted);
  const Vector& x_pred = predicted.mean;

  const CubaturePointSet set = rule.draw(density, rng);
  const Matrix values = evaluate_columns(h, set.points);
  const Vector z_pred = values * set.weights;
  const auto m = z_pred.size();
  if (z.size() != m) throw DomainError("measurement_update: measurement dimension mismatch");
  if (measurement.scale.rows() != m) throw DomainError("measurement_update: measurement noise dimension mismatch");

  Matrix zz, xz;
  if (options.shared_points) {
    zz = shifted_cross_moment(set.weights, values, values, z_pred, z_pred);
    xz = shifted_cross_moment(set.weights, set.points, values, x_pred, z_pred);
  } else {
    const CubaturePointSet zz_set = rule.draw(density, rng);
    const Matrix zz_values = evaluate_columns(h, zz_set.points);
    zz = shifted_cross_moment(zz_set.weights, zz_values, zz_values, z_pred, z_pred);
    const CubaturePointSet xz_set = rule.draw(density, rng);
    const Matrix xz_values = evaluate_columns(h, xz_set.points);
    xz = shifted_cross_moment(xz_set.weights, xz_set.points, xz_values, x_pred, z_pred);
  }

  const double ratio = (nu3 - 2.0) / nu3;
  const double noise_factor = nu2 * (nu3 - 2.0) / ((nu2 - 2.0) * nu3);
  const Matrix pzz = ratio * zz + noise_factor * measurement.scale;
  const Matrix pxz = ratio * xz;

  GainResult result = apply_gain(x_pred, predicted.scale, z, z_pred, pzz, pxz, residual);
  const double md = static_cast<double>(m);
  const double scale_factor = (nu3 - 2.0) * (nu3 + result.report.delta_squared) / (nu3 * (nu3 + md - 2.0));
  StateEstimate posterior = validate_estimate(StateEstimate{result.mean, scale_factor * result.reduced, nu3});
  return {std::move(posterior), std::move(result.report)};
}

StateEstimate rstnf_step(const StateEstimate& state, const Vector& z, const SystemModel& model,
                         const NoiseSpec& process, const NoiseSpec& measurement, const StudentTRule& rule,
                         RngStream& rng, const FilterOptions& options) {
  const StateEstimate predicted = time_update(state, model.f, process, rule, rng, options);
  return measurement_update(predicted, z, model.h, model.residual, measurement, rule, rng, options).first;
}

StateEstimate rstscf_step(const StateEstimate& state, const Vector& z, const SystemModel& model,
                          const NoiseSpec& process, const NoiseSpec& measurement, int samples, RngStream& rng,
                          const FilterOptions& options) {
  return rstnf_step(state, z, model, process, measurement, SstsrcrRule(samples), rng, options);
}

GaussianEstimate gaussian_time_update(const GaussianEstimate& state, const StateFunction& f,
                                      const Matrix& process_cov, const SirRule& rule, RngStream& rng,
                                      const FilterOptions& options) {
  const SpdMatrix cov(symmetrize(state.cov));
  const CubaturePointSet set = rule.draw(state.mean, cov, rng);
  Matrix values = evaluate_columns(f, set.points);
  const Vector mean = values * set.weights;
  Matrix second;
  if (options.shared_points) {
    second = shifted_cross_moment(set.weights, values, values, mean, mean);
  } else {
    const CubaturePointSet second_set = rule.draw(state.mean, cov, rng);
    values = evaluate_columns(f, second_set.points);
    second = shifted_cross_moment(second_set.weights, values, values, mean, mean);
  }
  if (process_cov.rows() != mean.size()) throw DomainError("gaussian_time_update: process noise dimension mismatch");
  return validate_estimate(GaussianEstimate{mean, second + process_cov});
}

std::pair<GaussianEstimate, MeasurementUpdateReport> gaussian_measurement_update(
    const GaussianEstimate& predicted, const Vector& z, const StateFunction& h, const ResidualFunction& residual,
    const Matrix& measurement_cov, const SirRule& rule, RngStream& rng, const FilterOptions& options) {
  const SpdMatrix cov(symmetrize(predicted.cov));
  const Vector& x_pred = predicted.mean;
  const CubaturePointSet set = rule.draw(x_pred, cov, rng);
  const Matrix values = evaluate_columns(h, set.points);
  const Vector z_pred = values * set.weights;
  if (z.size() != z_pred.size()) throw DomainError("gaussian_measurement_update: measurement dimension mismatch");
  if (measurement_cov.rows() != z_pred.size()) {
    throw DomainError("gaussian_measurement_update: measurement noise dimension mismatch");
  }

  Matrix zz, xz;
  if (options.shared_points) {
    zz = shifted_cross_moment(set.weights, values, values, z_pred, z_pred);
    xz = shifted_cross_moment(set.weights, set.points, values, x_pred, z_pred);
  } else {
    const CubaturePointSet zz_set = rule.draw(x_pred, cov, rng);
    const Matrix zz_values = evaluate_columns(h, zz_set.points);
    zz = shifted_cross_moment(zz_set.weights, zz_values, zz_values, z_pred, z_pred);
    const CubaturePointSet xz_set = rule.draw(x_pred, cov, rng);
    const Matrix xz_values = evaluate_columns(h, xz_set.points);
    xz = shifted_cross_moment(xz_set.weights, xz_set.points, xz_values, x_pred, z_pred);
  }

  GainResult result = apply_gain(x_pred, predicted.cov, z, z_pred, zz + measurement_cov, xz, residual);
  GaussianEstimate posterior = validate_estimate(GaussianEstimate{result.mean, result.reduced});
  return {std::move(posterior), std::move(result.report)};
}

GaussianEstimate sif_step(const GaussianEstimate& state, const Vector& z, const SystemModel& model,
                          const Matrix& process_cov, const Matrix& measurement_cov, int samples, RngStream& rng,
                          const FilterOptions& options) {
  const SirRule rule(samples);
  const GaussianEstimate predicted = gaussian_time_update(state, model.f, process_cov, rule, rng, options);
  return gaussian_measurement_update(predicted, z, model.h, model.residual, measurement_cov, rule, rng, options)
      .first;
}

}  // namespace rstscf
