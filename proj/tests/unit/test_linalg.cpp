#include <doctest.h>

#include "rstscf/errors.hpp"
#include "rstscf/linalg.hpp"
#include "rstscf/rng.hpp"

using namespace rstscf;

namespace {

Matrix random_spd(RngStream& rng, Eigen::Index n) {
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = rng.normal();
  return symmetrize(a * a.transpose() + 0.1 * Matrix::Identity(n, n));
}

}  // namespace

TEST_CASE("cholesky_sqrt of identity and diagonal matrices") {
  CHECK(cholesky_sqrt(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  Matrix d = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  Matrix expected = Eigen::Vector2d(2.0, 3.0).asDiagonal();
  CHECK((cholesky_sqrt(d) - expected).norm() < 1e-15);
}

TEST_CASE("cholesky_sqrt reconstructs its input") {
  Matrix m(2, 2);
  m << 2.0, 1.0, 1.0, 2.0;
  const Matrix l = cholesky_sqrt(m);
  CHECK((l * l.transpose() - m).norm() <= 1e-12);
  CHECK(l(0, 1) == 0.0);

  RngStream rng(11);
  for (Eigen::Index n = 1; n <= 10; ++n) {
    const Matrix s = random_spd(rng, n);
    const Matrix f = cholesky_sqrt(s);
    CHECK((f * f.transpose() - s).norm() / s.norm() <= 1e-12);
  }
}

TEST_CASE("cholesky_sqrt rejects indefinite matrices") {
  Matrix m = Eigen::Vector2d(1.0, -0.1).asDiagonal();
  CHECK_THROWS_AS(cholesky_sqrt(m), NotPositiveDefinite);
}

TEST_CASE("SpdMatrix checks symmetry and definiteness") {
  Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(SpdMatrix{asym}, DomainError);
  CHECK_THROWS_AS(SpdMatrix{Matrix(Eigen::Vector2d(1.0, -1.0).asDiagonal())}, NotPositiveDefinite);
  CHECK_THROWS_AS(SpdMatrix{Matrix::Ones(2, 3)}, DomainError);

  Matrix nearly(2, 2);
  nearly << 2.0, 1.0, 1.0 + 1e-13, 2.0;
  const SpdMatrix s(nearly);
  CHECK(asymmetry(s.matrix()) == 0.0);
}

TEST_CASE("SpdMatrix mahalanobis distance and log determinant") {
  Matrix m(2, 2);
  m << 4.0, 1.0, 1.0, 3.0;
  const SpdMatrix s(m);
  const Vector x = Eigen::Vector2d(1.0, -2.0);
  CHECK(s.mahalanobis_squared(x) == doctest::Approx(x.dot(m.inverse() * x)).epsilon(1e-13));
  CHECK(s.log_det() == doctest::Approx(std::log(11.0)).epsilon(1e-13));
  CHECK(SpdMatrix::identity(4).log_det() == 0.0);
}

TEST_CASE("solve_lower and symmetrize") {
  Matrix l(2, 2);
  l << 2.0, 0.0, 1.0, 4.0;
  const Vector x = solve_lower(l, Eigen::Vector2d(2.0, 9.0));
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(2.0));
  Matrix a(2, 2);
  a << 1.0, 2.0, 4.0, 1.0;
  CHECK(symmetrize(a)(0, 1) == 3.0);
  CHECK(asymmetry(Matrix::Zero(3, 3)) == 0.0);
}
