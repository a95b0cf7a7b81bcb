#include "rstscf/student_t.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "rstscf/errors.hpp"

namespace rstscf {

StudentTDensity::StudentTDensity(Vector mean_in, SpdMatrix scale_in, double dof_in)
    : mean(std::move(mean_in)), scale(std::move(scale_in)), dof(dof_in) {
  if (scale.dim() != mean.size()) throw DomainError("StudentTDensity: mean/scale dimension mismatch");
  if (!(dof > 0.0)) throw DomainError("StudentTDensity: dof must be positive");
}

Matrix StudentTDensity::covariance() const {
  if (!(dof > 2.0)) throw DofTooSmall("StudentTDensity: covariance requires dof > 2");
  return dof / (dof - 2.0) * scale.matrix();
}

double student_t_logpdf(const Vector& x, const Vector& mu, const SpdMatrix& sigma, double dof) {
  if (!(dof > 0.0)) throw DomainError("student_t_logpdf: dof must be positive");
  if (x.size() != mu.size() || sigma.dim() != mu.size()) {
    throw DomainError("student_t_logpdf: dimension mismatch");
  }
  const double n = static_cast<double>(mu.size());
  const double quad = sigma.mahalanobis_squared(x - mu);
  // ln Gamma((dof + n) / 2) - ln Gamma(dof / 2) without cancellation at large dof.
  const double log_gamma_ratio = -std::log(boost::math::tgamma_delta_ratio(0.5 * dof, 0.5 * n));
  return log_gamma_ratio - 0.5 * n * std::log(dof * std::numbers::pi) - 0.5 * sigma.log_det() -
         0.5 * (dof + n) * std::log1p(quad / dof);
}

double gaussian_logpdf(const Vector& x, const Vector& mu, const SpdMatrix& cov) {
  if (x.size() != mu.size() || cov.dim() != mu.size()) throw DomainError("gaussian_logpdf: dimension mismatch");
  const double n = static_cast<double>(mu.size());
  return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * cov.log_det() -
         0.5 * cov.mahalanobis_squared(x - mu);
}

}  // namespace rstscf
