#include <doctest.h>

#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rstscf/errors.hpp"
#include "rstscf/properties.hpp"
#include "rstscf/rng.hpp"
#include "rstscf/sampling.hpp"

using namespace rstscf;
using properties::ks_critical_value_1pct;
using properties::ks_statistic;

TEST_CASE("stream keys and derived streams") {
  // FNV-1a offset basis and the published hash of "a".
  CHECK(stream_key("") == 0xcbf29ce484222325ULL);
  CHECK(stream_key("a") == 0xaf63dc4c8601ec8cULL);
  RngStream a(1, 0), b(1, 0), c(1, 1), d(2, 0);
  const auto va = a(), vb = b(), vc = c(), vd = d();
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  RngStream parent(3, 4);
  CHECK(parent.derive(0)() != parent.derive(1)());
  CHECK(parent.derive(5)() == RngStream(3, 4).derive(5)());
  CHECK(parent.algorithm() == "xoshiro256**");
}

TEST_CASE("uniform lies in the open unit interval") {
  RngStream rng(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("standard normal moments and replay") {
  RngStream rng(2024);
  constexpr int n = 1000000;
  std::vector<double> x(n);
  for (auto& v : x) v = sample_standard_normal(rng);
  const auto ms = oracle::mean_se(x);
  double var = 0.0;
  for (double v : x) var += (v - ms.mean) * (v - ms.mean);
  var /= n - 1;
  CHECK(std::abs(ms.mean) <= 0.005);
  CHECK(std::abs(var - 1.0) <= 0.01);

  RngStream r1(77), r2(77);
  for (int i = 0; i < 1000; ++i) REQUIRE(sample_standard_normal(r1) == sample_standard_normal(r2));
}

TEST_CASE("gamma means and exponential special case") {
  RngStream rng(31);
  constexpr int n = 1000000;
  double s21 = 0.0, s33 = 0.0;
  for (int i = 0; i < n; ++i) {
    s21 += sample_gamma(rng, 2.0, 1.0);
    s33 += sample_gamma(rng, 3.0, 3.0);
  }
  CHECK(std::abs(s21 / n - 2.0) <= 0.02);
  CHECK(std::abs(s33 / n - 1.0) <= 0.01);

  const double rate = 2.5;
  std::vector<double> e(100000);
  for (auto& v : e) v = sample_gamma(rng, 1.0, rate);
  const double d = ks_statistic(e, [&](double x) { return 1.0 - std::exp(-rate * x); });
  CHECK(d <= ks_critical_value_1pct(e.size()));
}

TEST_CASE("gamma with small shape stays positive and has the right mean") {
  RngStream rng(32);
  constexpr int n = 400000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = sample_gamma(rng, 0.3, 1.0);
    REQUIRE(g >= 0.0);
    REQUIRE(std::isfinite(g));
    sum += g;
  }
  // sd of Gamma(0.3) is sqrt(0.3); 4 SE is about 0.0035.
  CHECK(std::abs(sum / n - 0.3) <= 0.0035);
  CHECK_THROWS_AS(sample_gamma(rng, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(sample_gamma(rng, 1.0, -1.0), DomainError);
}

TEST_CASE("beta mean, support and uniform special case") {
  RngStream rng(41);
  constexpr int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double b = sample_beta(rng, 3.0, 1.5);
    REQUIRE(b >= 0.0);
    REQUIRE(b <= 1.0);
    sum += b;
  }
  CHECK(std::abs(sum / n - 3.0 / 4.5) <= 0.01 * 3.0 / 4.5);

  std::vector<double> u(100000);
  for (auto& v : u) v = sample_beta(rng, 1.0, 1.0);
  CHECK(ks_statistic(u, [](double x) { return x; }) <= ks_critical_value_1pct(u.size()));

  std::vector<double> b(100000);
  for (auto& v : b) v = sample_beta(rng, 2.5, 0.7);
  const boost::math::beta_distribution<> dist(2.5, 0.7);
  CHECK(ks_statistic(b, [&](double x) { return boost::math::cdf(dist, x); }) <= ks_critical_value_1pct(b.size()));
}

TEST_CASE("Haar orthogonal matrices") {
  RngStream rng(51);
  for (Eigen::Index n = 1; n <= 6; ++n) {
    for (int i = 0; i < 200; ++i) {
      const Matrix q = sample_haar_orthogonal(rng, n);
      REQUIRE((q * q.transpose() - Matrix::Identity(n, n)).norm() <= 1e-10);
      REQUIRE(std::abs(std::abs(q.determinant()) - 1.0) <= 1e-10);
      for (Eigen::Index j = 0; j < n; ++j) REQUIRE(std::abs(q.col(j).norm() - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("Haar on O(1) is a fair sign") {
  RngStream rng(52);
  constexpr int n = 100000;
  int positive = 0;
  for (int i = 0; i < n; ++i) {
    const Matrix q = sample_haar_orthogonal(rng, 1);
    REQUIRE(std::abs(std::abs(q(0, 0)) - 1.0) <= 1e-15);
    positive += q(0, 0) > 0.0;
  }
  CHECK(std::abs(static_cast<double>(positive) / n - 0.5) <= 0.02);
}

TEST_CASE("Haar first column is uniform on the sphere") {
  RngStream rng(53);
  constexpr int n = 100000;
  Matrix acc = Matrix::Zero(3, 3);
  for (int i = 0; i < n; ++i) {
    const Vector c = sample_haar_orthogonal(rng, 3).col(0);
    acc += c * c.transpose();
  }
  acc /= n;
  CHECK((acc - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() <= 0.01);
}

TEST_CASE("sign fix: the R factor of the underlying QR has a positive diagonal") {
  // Regenerate the Gaussian matrix from the same stream and check Q^T U is upper triangular
  // with a positive diagonal.
  RngStream a(61), b(61);
  const Matrix q = sample_haar_orthogonal(a, 4);
  Matrix u(4, 4);
  for (Eigen::Index j = 0; j < 4; ++j)
    for (Eigen::Index i = 0; i < 4; ++i) u(i, j) = b.normal();
  const Matrix r = q.transpose() * u;
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(r(i, i) > 0.0);
    for (Eigen::Index j = 0; j < i; ++j) CHECK(std::abs(r(i, j)) <= 1e-12);
  }
}

TEST_CASE("multivariate Student's t moments") {
  RngStream rng(71);
  constexpr int n = 1000000;
  const Vector mu = Eigen::Vector2d(1.0, -2.0);
  const SpdMatrix scale = SpdMatrix::identity(2);
  std::vector<double> x0(n);
  Matrix cov = Matrix::Zero(2, 2);
  Vector mean = Vector::Zero(2);
  for (int i = 0; i < n; ++i) {
    const Vector x = sample_multivariate_student_t(rng, mu, scale, 5.0);
    x0[static_cast<std::size_t>(i)] = x(0);
    mean += x;
    cov += (x - mu) * (x - mu).transpose();
  }
  mean /= n;
  cov /= n;
  const auto ms = oracle::mean_se(x0);
  CHECK(std::abs(ms.mean - mu(0)) <= 4.0 * ms.se);
  CHECK(std::abs(mean(1) - mu(1)) <= 4.0 * ms.se * 1.1);
  const Matrix expected = 5.0 / 3.0 * Matrix::Identity(2, 2);
  CHECK((cov - expected).cwiseAbs().maxCoeff() <= 0.05 * 5.0 / 3.0);

  Matrix gcov = Matrix::Zero(2, 2);
  constexpr int m = 200000;
  for (int i = 0; i < m; ++i) {
    const Vector x = sample_multivariate_student_t(rng, mu, scale, 1e8);
    gcov += (x - mu) * (x - mu).transpose();
  }
  gcov /= m;
  CHECK((gcov - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 0.05);
}

TEST_CASE("samplers replay bit-identically") {
  RngStream a(81), b(81);
  for (int i = 0; i < 100; ++i) {
    REQUIRE(sample_gamma(a, 0.7, 2.0) == sample_gamma(b, 0.7, 2.0));
    REQUIRE(sample_beta(a, 2.0, 3.0) == sample_beta(b, 2.0, 3.0));
    REQUIRE(sample_haar_orthogonal(a, 3) == sample_haar_orthogonal(b, 3));
  }
}
