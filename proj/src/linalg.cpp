#include "rstscf/linalg.hpp"

#include <cmath>
#include <string>

#include "rstscf/errors.hpp"

namespace rstscf {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

}  // namespace

Matrix cholesky_sqrt(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw NotPositiveDefinite("cholesky_sqrt: matrix must be square and non-empty");
  }
  if (!sigma.allFinite()) {
    throw NotPositiveDefinite("cholesky_sqrt: matrix has non-finite entries");
  }
  const Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("cholesky_sqrt: non-positive pivot");
  }
  Matrix lower = llt.matrixL();
  for (Eigen::Index i = 0; i < lower.rows(); ++i) {
    if (!(lower(i, i) > 0.0)) {
      throw NotPositiveDefinite("cholesky_sqrt: non-positive pivot at row " + std::to_string(i));
    }
  }
  return lower;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double asymmetry(const Matrix& m) {
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  return (m - m.transpose()).norm() / norm;
}

Vector solve_lower(const Matrix& lower, const Vector& b) {
  return lower.triangularView<Eigen::Lower>().solve(b);
}

SpdMatrix::SpdMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("SpdMatrix: matrix is not square");
  if (asymmetry(m) > kSymmetryTolerance) throw DomainError("SpdMatrix: matrix is not symmetric");
  matrix_ = symmetrize(m);
  lower_ = cholesky_sqrt(matrix_);
}

double SpdMatrix::mahalanobis_squared(const Vector& x) const {
  return solve_lower(lower_, x).squaredNorm();
}

double SpdMatrix::log_det() const { return 2.0 * lower_.diagonal().array().log().sum(); }

}  // namespace rstscf
