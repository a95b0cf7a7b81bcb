#pragma once

namespace rstscf {

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b). Throws DomainError unless a, b > 0.
double ln_beta(double a, double b);

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

}  // namespace rstscf
