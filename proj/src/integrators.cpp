#include "rstscf/integrators.hpp"

#include <atomic>
#include <cmath>

#include "rstscf/errors.hpp"
#include "rstscf/sampling.hpp"

namespace rstscf {

namespace {

constexpr double kMinRadius = 1e-8;
constexpr double kLimitDof = 1e8;

std::atomic<std::uint64_t> g_radial_redraws{0};

void require_dof_above_two(double dof, const char* who) {
  if (!(dof > 2.0)) throw DofTooSmall(std::string(who) + ": dof must be > 2");
}

void require_samples(int samples, const char* who) {
  if (samples < 1) throw DomainError(std::string(who) + ": sample count must be >= 1");
}

// Symmetric 2n+1 set around `mean` along the columns of `axes` (already scaled by the radius).
CubaturePointSet symmetric_set(const Vector& mean, const Matrix& axes, double center_weight, double axis_weight) {
  const Eigen::Index n = mean.size();
  CubaturePointSet set;
  set.points.resize(n, 2 * n + 1);
  set.weights.resize(2 * n + 1);
  set.points.col(0) = mean;
  set.weights(0) = center_weight;
  for (Eigen::Index i = 0; i < n; ++i) {
    set.points.col(1 + 2 * i) = mean - axes.col(i);
    set.points.col(2 + 2 * i) = mean + axes.col(i);
    set.weights(1 + 2 * i) = axis_weight;
    set.weights(2 + 2 * i) = axis_weight;
  }
  return set;
}

Vector mean_of_columns(const Matrix& m) { return m.rowwise().mean(); }

Vector standard_error_of_columns(const Matrix& m) {
  const Eigen::Index count = m.cols();
  if (count < 2) return Vector::Zero(m.rows());
  const Vector mean = mean_of_columns(m);
  const Matrix centered = m.colwise() - mean;
  const Vector variance = centered.rowwise().squaredNorm() / static_cast<double>(count - 1);
  return (variance / static_cast<double>(count)).cwiseSqrt();
}

}  // namespace

Vector apply_rule(const CubaturePointSet& set, const Integrand& g) {
  if (set.size() == 0) throw DomainError("apply_rule: empty point set");
  Vector total;
  for (Eigen::Index j = 0; j < set.size(); ++j) {
    const Vector value = g(set.points.col(j));
    if (!value.allFinite()) throw NonFiniteIntegrand("integrand returned a non-finite value");
    if (j == 0) {
      total = set.weights(j) * value;
    } else {
      if (value.size() != total.size()) throw DomainError("apply_rule: integrand output size changed");
      total += set.weights(j) * value;
    }
  }
  return total;
}

CubaturePointSet average_point_sets(const std::vector<CubaturePointSet>& sets) {
  if (sets.empty()) throw DomainError("average_point_sets: no sets");
  Eigen::Index total = 0;
  for (const auto& s : sets) total += s.size();
  CubaturePointSet out;
  out.points.resize(sets.front().points.rows(), total);
  out.weights.resize(total);
  const double scale = 1.0 / static_cast<double>(sets.size());
  Eigen::Index offset = 0;
  for (const auto& s : sets) {
    out.points.middleCols(offset, s.size()) = s.points;
    out.weights.segment(offset, s.size()) = scale * s.weights;
    offset += s.size();
  }
  return out;
}

double sample_radial_point(RngStream& rng, Eigen::Index n, double dof) {
  require_dof_above_two(dof, "sample_radial_point");
  if (n < 1) throw DomainError("sample_radial_point: dimension must be >= 1");
  const double alpha = 0.5 * static_cast<double>(n + 2);
  const double beta = 0.5 * (dof - 2.0);
  for (;;) {
    // tau / (1 - tau) with tau = g1 / (g1 + g2), without rounding tau to 1 when beta is small.
    const double g1 = sample_gamma(rng, alpha, 1.0);
    const double g2 = sample_gamma(rng, beta, 1.0);
    const double r2 = std::sqrt(g1 / g2);
    if (r2 >= kMinRadius && std::isfinite(r2)) return r2;
    g_radial_redraws.fetch_add(1, std::memory_order_relaxed);
  }
}

std::uint64_t radial_redraw_count() { return g_radial_redraws.load(std::memory_order_relaxed); }

CubaturePointSet sstsrcr_points(const StudentTDensity& density, double r2, const Matrix& rotation) {
  require_dof_above_two(density.dof, "sstsrcr_points");
  const Eigen::Index n = density.dim();
  if (rotation.rows() != n || rotation.cols() != n) throw DomainError("sstsrcr_points: rotation has wrong shape");
  const double nu = density.dof;
  const double r2_sq = r2 * r2;
  const double axis_weight = 1.0 / (2.0 * (nu - 2.0) * r2_sq);
  const double center_weight = 1.0 - static_cast<double>(n) / ((nu - 2.0) * r2_sq);
  const Matrix axes = (r2 * std::sqrt(nu)) * (density.scale.sqrt() * rotation);
  return symmetric_set(density.mean, axes, center_weight, axis_weight);
}

CubaturePointSet build_sstsrcr_points(RngStream& rng, const StudentTDensity& density) {
  require_dof_above_two(density.dof, "build_sstsrcr_points");
  const Matrix q = sample_haar_orthogonal(rng, density.dim());
  const double r2 = sample_radial_point(rng, density.dim(), density.dof);
  return sstsrcr_points(density, r2, q);
}

Vector sstsrcr_integrate(const Integrand& g, const StudentTDensity& density, int samples, RngStream& rng) {
  return apply_rule(SstsrcrRule(samples).draw(density, rng), g);
}

CubaturePointSet deterministic_stsrcr_points(const StudentTDensity& density) {
  require_dof_above_two(density.dof, "deterministic_stsrcr_points");
  const Eigen::Index n = density.dim();
  const double nu = density.dof;
  const double c = std::sqrt(static_cast<double>(n) * nu / (nu - 2.0));
  const Matrix axes = c * density.scale.sqrt();
  CubaturePointSet full = symmetric_set(density.mean, axes, 0.0, 0.5 / static_cast<double>(n));
  // Drop the zero-weight centre point.
  CubaturePointSet set;
  set.points = full.points.rightCols(2 * n);
  set.weights = full.weights.tail(2 * n);
  return set;
}

Vector deterministic_stsrcr_integrate(const Integrand& g, const StudentTDensity& density) {
  return apply_rule(deterministic_stsrcr_points(density), g);
}

CubaturePointSet build_sir_points(RngStream& rng, const Vector& mean, const SpdMatrix& cov) {
  const Eigen::Index n = mean.size();
  if (cov.dim() != n) throw DomainError("build_sir_points: dimension mismatch");
  const Matrix q = sample_haar_orthogonal(rng, n);
  double rho;
  do {
    rho = std::sqrt(2.0 * sample_gamma(rng, 0.5 * static_cast<double>(n + 2), 1.0));
  } while (!(rho >= kMinRadius));
  const double rho_sq = rho * rho;
  const Matrix axes = rho * (cov.sqrt() * q);
  return symmetric_set(mean, axes, 1.0 - static_cast<double>(n) / rho_sq, 0.5 / rho_sq);
}

Vector sir_integrate(const Integrand& g, const Vector& mean, const SpdMatrix& cov, int samples, RngStream& rng) {
  return apply_rule(SirRule(samples).draw(mean, cov, rng), g);
}

CubaturePointSet build_mc_points(RngStream& rng, const StudentTDensity& density, int samples) {
  require_samples(samples, "build_mc_points");
  CubaturePointSet set;
  set.points.resize(density.dim(), samples);
  set.weights = Vector::Constant(samples, 1.0 / static_cast<double>(samples));
  for (int l = 0; l < samples; ++l) {
    set.points.col(l) = sample_multivariate_student_t(rng, density.mean, density.scale, density.dof);
  }
  return set;
}

Vector mc_integrate(const Integrand& g, const StudentTDensity& density, int samples, RngStream& rng) {
  return apply_rule(build_mc_points(rng, density, samples), g);
}

LimitConsistencyReport limit_consistency_check(const Integrand& g, const Vector& mean, const SpdMatrix& cov,
                                               int samples, std::uint64_t seed) {
  require_samples(samples, "limit_consistency_check");
  const StudentTDensity density(mean, cov, kLimitDof);
  RngStream student_rng(seed, stream_key("limit/sstsrcr"));
  RngStream gaussian_rng(seed, stream_key("limit/sir"));

  const Eigen::Index d = g(mean).size();
  Matrix student_values(d, samples);
  Matrix gaussian_values(d, samples);
  for (int l = 0; l < samples; ++l) {
    student_values.col(l) = apply_rule(build_sstsrcr_points(student_rng, density), g);
    gaussian_values.col(l) = apply_rule(build_sir_points(gaussian_rng, mean, cov), g);
  }

  LimitConsistencyReport report{kLimitDof,
                                mean_of_columns(student_values),
                                mean_of_columns(gaussian_values),
                                0.0,
                                standard_error_of_columns(student_values),
                                standard_error_of_columns(gaussian_values)};
  report.gap = (report.sstsrcr_estimate - report.sir_estimate).cwiseAbs().maxCoeff();
  return report;
}

SstsrcrRule::SstsrcrRule(int samples) : samples_(samples) { require_samples(samples, "SstsrcrRule"); }

CubaturePointSet SstsrcrRule::draw(const StudentTDensity& density, RngStream& rng) const {
  if (samples_ == 1) return build_sstsrcr_points(rng, density);
  std::vector<CubaturePointSet> sets;
  sets.reserve(static_cast<std::size_t>(samples_));
  for (int l = 0; l < samples_; ++l) sets.push_back(build_sstsrcr_points(rng, density));
  return average_point_sets(sets);
}

CubaturePointSet DeterministicStsrcrRule::draw(const StudentTDensity& density, RngStream&) const {
  return deterministic_stsrcr_points(density);
}

MonteCarloRule::MonteCarloRule(int samples) : samples_(samples) { require_samples(samples, "MonteCarloRule"); }

CubaturePointSet MonteCarloRule::draw(const StudentTDensity& density, RngStream& rng) const {
  return build_mc_points(rng, density, samples_);
}

SirRule::SirRule(int samples) : samples_(samples) { require_samples(samples, "SirRule"); }

CubaturePointSet SirRule::draw(const Vector& mean, const SpdMatrix& cov, RngStream& rng) const {
  if (samples_ == 1) return build_sir_points(rng, mean, cov);
  std::vector<CubaturePointSet> sets;
  sets.reserve(static_cast<std::size_t>(samples_));
  for (int l = 0; l < samples_; ++l) sets.push_back(build_sir_points(rng, mean, cov));
  return average_point_sets(sets);
}

std::unique_ptr<StudentTRule> make_student_t_rule(const std::string& name, int samples) {
  if (name == "sstsrcr") return std::make_unique<SstsrcrRule>(samples);
  if (name == "stsrcr_det") return std::make_unique<DeterministicStsrcrRule>();
  if (name == "mc") return std::make_unique<MonteCarloRule>(samples);
  throw DomainError("unknown Student's t rule '" + name + "'");
}

}  // namespace rstscf
