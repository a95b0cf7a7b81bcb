#include "rstscf/properties.hpp"

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <fmt/format.h>

#include "rstscf/errors.hpp"
#include "rstscf/integrators.hpp"
#include "rstscf/reference.hpp"
#include "rstscf/sampling.hpp"

namespace rstscf::properties {

namespace {

struct RandomCase {
  Vector mean;
  Matrix scale;
  double dof;
};

double uniform_in(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

Matrix random_spd(RngStream& rng, Eigen::Index n) {
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = rng.normal();
  }
  return symmetrize(a * a.transpose() / static_cast<double>(n) + 0.2 * Matrix::Identity(n, n));
}

RandomCase random_case(RngStream& rng, Eigen::Index n, const CheckOptions& options) {
  RandomCase c{sample_standard_normal_vector(rng, n), random_spd(rng, n), 0.0};
  c.dof = options.dof ? *options.dof : uniform_in(rng, 4.0, 30.0);
  return c;
}

// Random polynomial of total degree <= 3: c0 + b^T x + x^T A x + sum_ijk T_ijk x_i x_j x_k.
struct CubicPolynomial {
  double c0;
  Vector b;
  Matrix a;
  std::vector<double> t;  // n^3 entries, index (i * n + j) * n + k
  Eigen::Index n;

  double operator()(const Vector& x) const {
    double value = c0 + b.dot(x) + x.dot(a * x);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) value += t[static_cast<std::size_t>((i * n + j) * n + k)] * x(i) * x(j) * x(k);
      }
    }
    return value;
  }

  // Exact expectation from E[x] = mu, Cov[x] = C and vanishing odd central moments.
  double expectation(const Vector& mu, const Matrix& c) const {
    double value = c0 + b.dot(mu) + mu.dot(a * mu) + (a * c).trace();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
          const double m3 = mu(i) * mu(j) * mu(k) + mu(i) * c(j, k) + mu(j) * c(i, k) + mu(k) * c(i, j);
          value += t[static_cast<std::size_t>((i * n + j) * n + k)] * m3;
        }
      }
    }
    return value;
  }
};

CubicPolynomial random_cubic(RngStream& rng, Eigen::Index n) {
  CubicPolynomial p{rng.normal(), sample_standard_normal_vector(rng, n), Matrix(n, n), {}, n};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) p.a(i, j) = rng.normal();
  }
  p.t.resize(static_cast<std::size_t>(n * n * n));
  for (auto& v : p.t) v = rng.normal();
  return p;
}

PropertyResult make_result(std::string id, std::string description, bool passed, std::string detail) {
  return {std::move(id), std::move(description), passed, std::move(detail)};
}

double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (const double x : v) var += (x - mean) * (x - mean);
  return var / static_cast<double>(v.size() - 1);
}

double sample_mean(const std::vector<double>& v) {
  double mean = 0.0;
  for (const double x : v) mean += x;
  return mean / static_cast<double>(v.size());
}

Integrand cos_integrand(const Vector& a) {
  return [a](const Vector& x) { return Vector::Constant(1, std::cos(a.dot(x))); };
}

}  // namespace

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

PropertyResult check_weight_normalization(const CheckOptions& options) {
  RngStream rng(options.seed, stream_key("P1"));
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const Eigen::Index n = 1 + c % 5;
    const RandomCase rc = random_case(rng, n, options);
    const StudentTDensity density(rc.mean, SpdMatrix(rc.scale), rc.dof);
    const SpdMatrix cov(rc.scale);
    const std::vector<double> sums = {
        build_sstsrcr_points(rng, density).weight_sum(),
        SstsrcrRule(7).draw(density, rng).weight_sum(),
        deterministic_stsrcr_points(density).weight_sum(),
        build_sir_points(rng, rc.mean, cov).weight_sum(),
        build_mc_points(rng, density, 25).weight_sum(),
    };
    for (const double s : sums) worst = std::max(worst, std::abs(s - 1.0));
  }
  return make_result("P1", "weight normalization", worst <= 1e-12, fmt::format("max |sum w - 1| = {:.3e}", worst));
}

PropertyResult check_third_degree_exactness(const CheckOptions& options) {
  RngStream rng(options.seed, stream_key("P2"));
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const Eigen::Index n = 1 + c % 5;
    const RandomCase rc = random_case(rng, n, options);
    const StudentTDensity density(rc.mean, SpdMatrix(rc.scale), rc.dof);
    const CubicPolynomial p1 = random_cubic(rng, n);
    const CubicPolynomial p2 = random_cubic(rng, n);
    const Integrand g = [&](const Vector& x) {
      Vector out(2);
      out << p1(x), p2(x);
      return out;
    };
    const Vector estimate = sstsrcr_integrate(g, density, 1, rng);
    const Matrix cov = density.covariance();
    const double e1 = p1.expectation(rc.mean, cov);
    const double e2 = p2.expectation(rc.mean, cov);
    worst = std::max(worst, std::abs(estimate(0) - e1) / std::max(1.0, std::abs(e1)));
    worst = std::max(worst, std::abs(estimate(1) - e2) / std::max(1.0, std::abs(e2)));
  }
  return make_result("P2", "third-degree exactness (N=1, 200 cases)", worst <= 1e-9,
                     fmt::format("max relative error = {:.3e}", worst));
}

PropertyResult check_unbiasedness(const CheckOptions& options) {
  struct Case {
    Vector a, mean;
    Matrix scale;
    double dof;
  };
  const double dof1 = options.dof.value_or(5.0);
  const double dof2 = options.dof.value_or(6.0);
  Matrix s2(2, 2);
  s2 << 1.0, 0.3, 0.3, 0.5;
  const std::vector<Case> cases = {
      {Vector::Constant(1, 1.0), Vector::Zero(1), Matrix::Identity(1, 1), dof1},
      {(Vector(2) << 0.8, -0.5).finished(), (Vector(2) << 0.3, -0.2).finished(), s2, dof2},
  };
  RngStream rng(options.seed, stream_key("P3"));
  constexpr int kEvaluations = 10000;
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const StudentTDensity density(c.mean, SpdMatrix(c.scale), c.dof);
    const Integrand g = cos_integrand(c.a);
    std::vector<double> values(kEvaluations);
    for (auto& v : values) v = apply_rule(build_sstsrcr_points(rng, density), g)(0);
    const double mean = sample_mean(values);
    const double se = std::sqrt(sample_variance(values) / kEvaluations);
    const double exact = reference::student_t_cos_expectation(c.a, c.mean, c.scale, c.dof);
    const double z = se > 0.0 ? std::abs(mean - exact) / se : (mean == exact ? 0.0 : INFINITY);
    ok = ok && z <= 4.0;
    detail += fmt::format("n={}: mean={:.6f} ref={:.6f} |z|={:.2f}; ", c.mean.size(), mean, exact, z);
  }
  return make_result("P3", "unbiasedness (1e4 single-sample evaluations)", ok, detail);
}

PropertyResult check_radial_law(const CheckOptions& options) {
  std::vector<std::pair<Eigen::Index, double>> cases;
  if (options.dof) {
    cases = {{2, *options.dof}, {3, *options.dof}, {4, *options.dof}};
  } else {
    cases = {{2, 8.0}, {4, 6.0}, {3, 10.0}};
  }
  RngStream rng(options.seed, stream_key("P4"));
  constexpr int kDraws = 100000;
  bool ok = true;
  std::string detail;
  for (const auto& [n, dof] : cases) {
    // 1 - tau = 1 / (1 + r2^2) ~ Beta(beta, alpha) keeps its precision when tau is close to one.
    std::vector<double> one_minus_tau(kDraws);
    double sum_r2 = 0.0;
    for (auto& t : one_minus_tau) {
      const double r = sample_radial_point(rng, n, dof);
      const double r2 = r * r;
      sum_r2 += r2;
      t = 1.0 / (1.0 + r2);
    }
    const double alpha = 0.5 * static_cast<double>(n + 2);
    const double beta = 0.5 * (dof - 2.0);
    const double ks = ks_statistic(one_minus_tau, [&](double x) { return boost::math::ibeta(beta, alpha, x); });
    const bool ks_ok = ks <= ks_critical_value_1pct(one_minus_tau.size());
    std::string moment = "E[r^2] undefined (dof <= 4)";
    bool moment_ok = true;
    if (dof > 4.0) {
      const double expected = static_cast<double>(n + 2) / (dof - 4.0);
      const double mean = sum_r2 / kDraws;
      moment_ok = std::abs(mean - expected) <= 0.02 * expected;
      moment = fmt::format("E[r^2]={:.4f} (expected {:.4f})", mean, expected);
    }
    ok = ok && ks_ok && moment_ok;
    detail += fmt::format("(n={}, dof={}): {}, KS={:.4f} (crit {:.4f}); ", n, dof, moment, ks,
                          ks_critical_value_1pct(one_minus_tau.size()));
  }
  return make_result("P4", "radial law", ok, detail);
}

PropertyResult check_variance_ordering(const CheckOptions& options) {
  const double dof = options.dof.value_or(5.0);
  const StudentTDensity density(Vector::Zero(1), SpdMatrix::identity(1), dof);
  const Integrand g = cos_integrand(Vector::Constant(1, 1.0));
  constexpr int kReplications = 1000;
  constexpr int kRuleSamples = 10;
  constexpr int kBudget = 3 * kRuleSamples;  // 2n + 1 evaluations per rule sample
  RngStream rule_rng(options.seed, stream_key("P5/sstsrcr"));
  RngStream mc_rng(options.seed, stream_key("P5/mc"));
  std::vector<double> rule_values(kReplications), mc_values(kReplications);
  for (int i = 0; i < kReplications; ++i) {
    rule_values[i] = sstsrcr_integrate(g, density, kRuleSamples, rule_rng)(0);
    mc_values[i] = mc_integrate(g, density, kBudget, mc_rng)(0);
  }
  const double v_rule = sample_variance(rule_values);
  const double v_mc = sample_variance(mc_values);
  const boost::math::fisher_f f_dist(kReplications - 1, kReplications - 1);
  const double critical = boost::math::quantile(f_dist, 0.99);
  const double ratio = v_mc / v_rule;
  return make_result("P5", "variance below Monte Carlo at equal budget", ratio > critical,
                     fmt::format("var(sstsrcr)={:.3e} var(mc)={:.3e} ratio={:.2f} (F crit {:.3f})", v_rule, v_mc,
                                 ratio, critical));
}

PropertyResult check_limit_consistency(const CheckOptions& options) {
  const Vector mean = (Vector(2) << 0.5, -1.0).finished();
  Matrix cov_m(2, 2);
  cov_m << 1.0, 0.2, 0.2, 0.5;
  const SpdMatrix cov(cov_m);
  constexpr int kSamples = 2000;
  bool ok = true;
  std::string detail;

  const Integrand linear = [](const Vector& x) { return x; };
  const auto lin = limit_consistency_check(linear, mean, cov, 1, options.seed);
  const double lin_err = std::max((lin.sstsrcr_estimate - mean).cwiseAbs().maxCoeff(),
                                  (lin.sir_estimate - mean).cwiseAbs().maxCoeff()) / mean.cwiseAbs().maxCoeff();
  ok = ok && lin_err <= 1e-4;
  detail += fmt::format("linear rel err={:.2e}; ", lin_err);

  const Integrand quadratic = [mean](const Vector& x) -> Vector {
    const Vector d = x - mean;
    const Matrix outer = d * d.transpose();
    return Eigen::Map<const Vector>(outer.data(), outer.size());
  };
  const auto quad = limit_consistency_check(quadratic, mean, cov, 1, options.seed);
  const Vector exact = Eigen::Map<const Vector>(cov.matrix().data(), cov.matrix().size());
  const double quad_err = std::max((quad.sstsrcr_estimate - exact).cwiseAbs().maxCoeff(),
                                   (quad.sir_estimate - exact).cwiseAbs().maxCoeff()) / exact.cwiseAbs().maxCoeff();
  ok = ok && quad_err <= 1e-4;
  detail += fmt::format("quadratic rel err={:.2e}; ", quad_err);

  const Vector a = (Vector(2) << 0.7, 0.4).finished();
  const auto cs = limit_consistency_check(cos_integrand(a), mean, cov, kSamples, options.seed);
  const double exact_cos = reference::gaussian_cos_expectation(a, mean, cov.matrix());
  const double z_st = std::abs(cs.sstsrcr_estimate(0) - exact_cos) / cs.sstsrcr_standard_error(0);
  const double z_sir = std::abs(cs.sir_estimate(0) - exact_cos) / cs.sir_standard_error(0);
  const double z_gap = cs.gap / std::hypot(cs.sstsrcr_standard_error(0), cs.sir_standard_error(0));
  ok = ok && z_st <= 4.0 && z_sir <= 4.0 && z_gap <= 4.0;
  detail += fmt::format("cos |z| sstsrcr={:.2f} sir={:.2f} gap={:.2f}", z_st, z_sir, z_gap);
  return make_result("L", "Gaussian limit consistency (dof = 1e8)", ok, detail);
}

std::vector<PropertyResult> run_rule_checks(const CheckOptions& options) {
  if (options.dof && !(*options.dof > 2.0)) throw DofTooSmall("dof must be > 2");
  return {check_weight_normalization(options), check_third_degree_exactness(options),
          check_unbiasedness(options),          check_radial_law(options),
          check_variance_ordering(options),     check_limit_consistency(options)};
}

}  // namespace rstscf::properties
