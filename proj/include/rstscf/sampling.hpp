#pragma once

#include "rstscf/linalg.hpp"
#include "rstscf/rng.hpp"

namespace rstscf {

double sample_standard_normal(RngStream& rng);

/// Vector of independent N(0, 1) variates.
Vector sample_standard_normal_vector(RngStream& rng, Eigen::Index n);

/// Gamma(shape, rate) variate by Marsaglia-Tsang squeeze/rejection. Shapes below one are
/// boosted through Gamma(shape + 1) * U^(1/shape). Throws DomainError unless shape, rate > 0.
double sample_gamma(RngStream& rng, double shape, double rate);

/// Beta(alpha, beta) variate as g1 / (g1 + g2) with g1 ~ Gamma(alpha, 1), g2 ~ Gamma(beta, 1).
double sample_beta(RngStream& rng, double alpha, double beta);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the columns of Q
/// multiplied by sign(R_ii) so that R has a positive diagonal.
Matrix sample_haar_orthogonal(RngStream& rng, Eigen::Index n);

/// Draw from N(mean, L * L^T) given the lower factor L.
Vector sample_gaussian(RngStream& rng, const Vector& mean, const Matrix& lower);

/// Draw from St(mean, scale, dof): mean + L * z * sqrt(dof / w), w ~ chi-square(dof).
Vector sample_multivariate_student_t(RngStream& rng, const Vector& mean, const SpdMatrix& scale, double dof);

}  // namespace rstscf
