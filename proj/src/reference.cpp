#include "rstscf/reference.hpp"

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <cmath>
#include <numbers>

#include "rstscf/errors.hpp"
#include "rstscf/special.hpp"

namespace rstscf::reference {

double student_t_characteristic(double t, double dof) {
  if (!(dof > 0.0)) throw DomainError("student_t_characteristic: dof must be positive");
  const double s = std::abs(t);
  if (s == 0.0) return 1.0;
  const double log_norm = ln_gamma(0.5 * (dof + 1.0)) - ln_gamma(0.5 * dof) - 0.5 * std::log(dof * std::numbers::pi);
  const auto density = [&](double x) {
    return std::exp(log_norm - 0.5 * (dof + 1.0) * std::log1p(x * x / dof));
  };
  static thread_local boost::math::quadrature::ooura_fourier_cos<double> integrator;
  // The density is even: phi(t) = 2 * int_0^inf f(x) cos(t x) dx.
  return 2.0 * integrator.integrate(density, s).first;
}

double student_t_cos_expectation(const Vector& a, const Vector& mean, const Matrix& scale, double dof) {
  const double location = a.dot(mean);
  const double spread = std::sqrt(a.dot(scale * a));
  return std::cos(location) * student_t_characteristic(spread, dof);
}

double gaussian_cos_expectation(const Vector& a, const Vector& mean, const Matrix& cov) {
  return std::cos(a.dot(mean)) * std::exp(-0.5 * a.dot(cov * a));
}

}  // namespace rstscf::reference
