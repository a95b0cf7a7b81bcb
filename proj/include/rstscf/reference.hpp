#pragma once

#include "rstscf/linalg.hpp"

namespace rstscf::reference {

/// E[cos(a^T x)] for x ~ St(mean, scale, dof), any dof > 0.
///
/// a^T x is univariate St(a^T mean, a^T scale a, dof), so the expectation reduces to
/// cos(a^T mean) * int cos(s t) t_dof(t) dt with s = sqrt(a^T scale a); the Fourier
/// integral is evaluated with double-exponential (Ooura) quadrature.
double student_t_cos_expectation(const Vector& a, const Vector& mean, const Matrix& scale, double dof);

/// E[cos(a^T x)] for x ~ N(mean, cov): cos(a^T mean) * exp(-a^T cov a / 2).
double gaussian_cos_expectation(const Vector& a, const Vector& mean, const Matrix& cov);

/// Standard Student's t characteristic function at t (Ooura quadrature).
double student_t_characteristic(double t, double dof);

}  // namespace rstscf::reference
