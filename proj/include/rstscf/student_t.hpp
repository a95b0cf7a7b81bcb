#pragma once

#include "rstscf/linalg.hpp"

namespace rstscf {

/// Multivariate Student's t density St(x; mean, scale, dof).
///
/// `scale` is the scale matrix, not the covariance; for dof > 2 the covariance is
/// dof / (dof - 2) * scale.
struct StudentTDensity {
  StudentTDensity(Vector mean, SpdMatrix scale, double dof);

  Eigen::Index dim() const noexcept { return mean.size(); }
  Matrix covariance() const;

  Vector mean;
  SpdMatrix scale;
  double dof;
};

/// log St(x; mu, sigma, dof), computed from the Cholesky factor and log-gamma ratios.
double student_t_logpdf(const Vector& x, const Vector& mu, const SpdMatrix& sigma, double dof);

double gaussian_logpdf(const Vector& x, const Vector& mu, const SpdMatrix& cov);

}  // namespace rstscf
