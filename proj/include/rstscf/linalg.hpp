#pragma once

#include <Eigen/Dense>

namespace rstscf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Lower-triangular L with L * L^T = sigma. Throws NotPositiveDefinite when a pivot is <= 0.
Matrix cholesky_sqrt(const Matrix& sigma);

/// (m + m^T) / 2
Matrix symmetrize(const Matrix& m);

/// Relative asymmetry ||m - m^T||_F / ||m||_F (0 for the zero matrix).
double asymmetry(const Matrix& m);

/// Solves L * x = b for lower-triangular L.
Vector solve_lower(const Matrix& lower, const Vector& b);

/// Symmetric positive definite matrix with its Cholesky factor cached.
///
/// Construction checks symmetry to within 1e-12 relative and factorizes; the stored
/// matrix is the symmetrized input. Instances are immutable values.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& m);

  static SpdMatrix identity(Eigen::Index n) { return SpdMatrix(Matrix::Identity(n, n)); }

  const Matrix& matrix() const noexcept { return matrix_; }
  /// Lower Cholesky factor.
  const Matrix& sqrt() const noexcept { return lower_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

  /// x^T * M^-1 * x through the cached factor.
  double mahalanobis_squared(const Vector& x) const;
  double log_det() const;

 private:
  Matrix matrix_;
  Matrix lower_;
};

}  // namespace rstscf
