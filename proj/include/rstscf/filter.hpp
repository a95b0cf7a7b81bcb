#pragma once

#include <functional>
#include <utility>

#include "rstscf/integrators.hpp"
#include "rstscf/linalg.hpp"
#include "rstscf/rng.hpp"

namespace rstscf {

/// Filtering (or predicted) Student's t density: mean, scale matrix and a dof held
/// constant over time.
struct StateEstimate {
  Vector mean;
  Matrix scale;
  double dof;
};

/// Mean and covariance of a Gaussian-assumed filter.
struct GaussianEstimate {
  Vector mean;
  Matrix cov;
};

/// Student's t noise model: scale matrix and dof (> 2).
///
/// The scale may be positive semi-definite: process noise entering through a
/// noise-gain matrix (G * Sigma * G^T) is rank deficient.
struct NoiseSpec {
  NoiseSpec(Matrix scale, double dof);

  /// dof / (dof - 2) * scale, the noise covariance.
  Matrix covariance() const { return dof / (dof - 2.0) * scale; }

  Matrix scale;
  double dof;
};

using StateFunction = std::function<Vector(const Vector&)>;
using ResidualFunction = std::function<Vector(const Vector& z, const Vector& z_pred)>;

/// z - z_pred
Vector subtract_residual(const Vector& z, const Vector& z_pred);

struct SystemModel {
  StateFunction f;
  StateFunction h;
  ResidualFunction residual = subtract_residual;
};

struct MeasurementUpdateReport {
  Vector z_pred;
  Matrix pzz;
  Matrix pxz;
  Matrix gain;
  /// Squared normalized innovation.
  double delta_squared = 0.0;
  /// True when Pzz needed the one-shot diagonal jitter to factorize.
  bool jitter_applied = false;
};

struct FilterOptions {
  /// Evaluate all moments of one update from a single realized point set. When false,
  /// every moment integral draws its own point set.
  bool shared_points = true;
};

/// Symmetrizes the scale matrix and checks that it factorizes. Throws NotPositiveDefinite.
StateEstimate validate_estimate(StateEstimate state);
GaussianEstimate validate_estimate(GaussianEstimate state);

StateEstimate time_update(const StateEstimate& state, const StateFunction& f, const NoiseSpec& process,
                          const StudentTRule& rule, RngStream& rng, const FilterOptions& options = {});

std::pair<StateEstimate, MeasurementUpdateReport> measurement_update(
    const StateEstimate& predicted, const Vector& z, const StateFunction& h, const ResidualFunction& residual,
    const NoiseSpec& measurement, const StudentTRule& rule, RngStream& rng, const FilterOptions& options = {});

/// One robust Student's t filter step with an arbitrary rule.
StateEstimate rstnf_step(const StateEstimate& state, const Vector& z, const SystemModel& model,
                         const NoiseSpec& process, const NoiseSpec& measurement, const StudentTRule& rule,
                         RngStream& rng, const FilterOptions& options = {});

/// One robust Student's t filter step using the stochastic cubature rule with N samples.
StateEstimate rstscf_step(const StateEstimate& state, const Vector& z, const SystemModel& model,
                          const NoiseSpec& process, const NoiseSpec& measurement, int samples, RngStream& rng,
                          const FilterOptions& options = {});

GaussianEstimate gaussian_time_update(const GaussianEstimate& state, const StateFunction& f,
                                      const Matrix& process_cov, const SirRule& rule, RngStream& rng,
                                      const FilterOptions& options = {});

std::pair<GaussianEstimate, MeasurementUpdateReport> gaussian_measurement_update(
    const GaussianEstimate& predicted, const Vector& z, const StateFunction& h, const ResidualFunction& residual,
    const Matrix& measurement_cov, const SirRule& rule, RngStream& rng, const FilterOptions& options = {});

/// One stochastic integration filter step (Gaussian-assumed) with N samples.
GaussianEstimate sif_step(const GaussianEstimate& state, const Vector& z, const SystemModel& model,
                          const Matrix& process_cov, const Matrix& measurement_cov, int samples, RngStream& rng,
                          const FilterOptions& options = {});

}  // namespace rstscf
