#include "rstscf/special.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "rstscf/errors.hpp"

namespace rstscf {

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("ln_gamma: argument must be positive and finite");
  return boost::math::lgamma(x);
}

double ln_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("ln_beta: arguments must be positive and finite");
  }
  return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}

}  // namespace rstscf
