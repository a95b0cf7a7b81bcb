#include "rstscf/sampling.hpp"

#include <cmath>

#include "rstscf/errors.hpp"

namespace rstscf {

namespace {

// Marsaglia & Tsang (2000), valid for shape >= 1.
double gamma_large_shape(RngStream& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_standard_normal(RngStream& rng) { return rng.normal(); }

Vector sample_standard_normal_vector(RngStream& rng, Eigen::Index n) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
  return z;
}

double sample_gamma(RngStream& rng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw DomainError("sample_gamma: shape and rate must be positive and finite");
  }
  if (shape >= 1.0) return gamma_large_shape(rng, shape) / rate;
  // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a). Work in logs so tiny shapes underflow gracefully.
  const double g = gamma_large_shape(rng, shape + 1.0);
  const double u = rng.uniform();
  return std::exp(std::log(g) + std::log(u) / shape) / rate;
}

double sample_beta(RngStream& rng, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("sample_beta: parameters must be positive");
  for (;;) {
    const double g1 = sample_gamma(rng, alpha, 1.0);
    const double g2 = sample_gamma(rng, beta, 1.0);
    const double sum = g1 + g2;
    if (sum > 0.0 && std::isfinite(sum)) return g1 / sum;
  }
}

Matrix sample_haar_orthogonal(RngStream& rng, Eigen::Index n) {
  if (n < 1) throw DomainError("sample_haar_orthogonal: dimension must be >= 1");
  for (;;) {
    Matrix u(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) u(i, j) = rng.normal();
    }
    const Eigen::HouseholderQR<Matrix> qr(u);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    const double scale = u.norm();
    bool degenerate = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(r(i, i)) <= 1e-12 * scale) degenerate = true;
    }
    if (degenerate) continue;
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (r(i, i) < 0.0) q.col(i) = -q.col(i);
    }
    return q;
  }
}

Vector sample_gaussian(RngStream& rng, const Vector& mean, const Matrix& lower) {
  return mean + lower.triangularView<Eigen::Lower>() * sample_standard_normal_vector(rng, mean.size());
}

Vector sample_multivariate_student_t(RngStream& rng, const Vector& mean, const SpdMatrix& scale, double dof) {
  if (!(dof > 0.0)) throw DomainError("sample_multivariate_student_t: dof must be positive");
  if (scale.dim() != mean.size()) throw DomainError("sample_multivariate_student_t: dimension mismatch");
  const Vector z = sample_standard_normal_vector(rng, mean.size());
  const double w = sample_gamma(rng, 0.5 * dof, 0.5);
  return mean + (scale.sqrt().triangularView<Eigen::Lower>() * z) * std::sqrt(dof / w);
}

}  // namespace rstscf
