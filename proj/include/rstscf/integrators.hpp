#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "rstscf/linalg.hpp"
#include "rstscf/rng.hpp"
#include "rstscf/student_t.hpp"

namespace rstscf {

/// g: R^n -> R^d. Vector-valued integrands are evaluated once per point and the rule is
/// applied componentwise.
using Integrand = std::function<Vector(const Vector&)>;

/// Weighted point set approximating an integral against a density. Points are the columns
/// of `points`. Weights may be negative and sum to one.
struct CubaturePointSet {
  Matrix points;
  Vector weights;

  Eigen::Index size() const noexcept { return weights.size(); }
  double weight_sum() const { return weights.sum(); }
};

/// Sum_j w_j g(x_j). Throws NonFiniteIntegrand if g is non-finite at any point.
Vector apply_rule(const CubaturePointSet& set, const Integrand& g);

/// Concatenates sets, scaling each by 1 / sets.size() (the average of the individual rules).
CubaturePointSet average_point_sets(const std::vector<CubaturePointSet>& sets);

/// Random radial point r2 = sqrt(tau / (1 - tau)) with tau ~ Beta((n+2)/2, (dof-2)/2).
/// Draws with r2 < 1e-8 are rejected and redrawn (see `radial_redraw_count`).
double sample_radial_point(RngStream& rng, Eigen::Index n, double dof);

/// Number of radial draws rejected by the r2 < 1e-8 guard since process start.
std::uint64_t radial_redraw_count();

/// The 2n+1 point set {mu; mu -/+ r2 sqrt(dof) L Q e_i} with weights
/// {1 - n/((dof-2) r2^2); 1/(2 (dof-2) r2^2)} for a given radius and rotation.
CubaturePointSet sstsrcr_points(const StudentTDensity& density, double r2, const Matrix& rotation);

/// One realization of the stochastic rule: fresh Haar rotation and radial draw.
CubaturePointSet build_sstsrcr_points(RngStream& rng, const StudentTDensity& density);

/// Average of N independent stochastic rule realizations.
Vector sstsrcr_integrate(const Integrand& g, const StudentTDensity& density, int samples, RngStream& rng);

/// Deterministic third-degree rule: 2n points mu -/+ sqrt(n dof/(dof-2)) L e_i, weights 1/(2n).
CubaturePointSet deterministic_stsrcr_points(const StudentTDensity& density);
Vector deterministic_stsrcr_integrate(const Integrand& g, const StudentTDensity& density);

/// One realization of the Gaussian stochastic integration rule: rho^2 ~ chi-square(n+2),
/// points {mu; mu -/+ rho L Q e_i}, weights {1 - n/rho^2; 1/(2 rho^2)}.
CubaturePointSet build_sir_points(RngStream& rng, const Vector& mean, const SpdMatrix& cov);
Vector sir_integrate(const Integrand& g, const Vector& mean, const SpdMatrix& cov, int samples, RngStream& rng);

/// N equally weighted draws from the Student's t density.
CubaturePointSet build_mc_points(RngStream& rng, const StudentTDensity& density, int samples);
Vector mc_integrate(const Integrand& g, const StudentTDensity& density, int samples, RngStream& rng);

struct LimitConsistencyReport {
  double dof;
  Vector sstsrcr_estimate;
  Vector sir_estimate;
  /// ||sstsrcr - sir||_inf
  double gap;
  /// Standard errors of each estimate across its samples (zero for N = 1).
  Vector sstsrcr_standard_error;
  Vector sir_standard_error;
};

/// Runs the stochastic Student's t rule at dof = 1e8 and the Gaussian rule with the same
/// sample count, each on its own stream derived from `seed`.
LimitConsistencyReport limit_consistency_check(const Integrand& g, const Vector& mean, const SpdMatrix& cov,
                                               int samples, std::uint64_t seed);

/// Interface over Student's t weighted integration rules used by the filter.
class StudentTRule {
 public:
  virtual ~StudentTRule() = default;

  /// Realizes the rule for `density`. Deterministic rules ignore `rng`.
  virtual CubaturePointSet draw(const StudentTDensity& density, RngStream& rng) const = 0;
  virtual std::string name() const = 0;
};

class SstsrcrRule final : public StudentTRule {
 public:
  explicit SstsrcrRule(int samples);
  CubaturePointSet draw(const StudentTDensity& density, RngStream& rng) const override;
  std::string name() const override { return "sstsrcr"; }
  int samples() const noexcept { return samples_; }

 private:
  int samples_;
};

class DeterministicStsrcrRule final : public StudentTRule {
 public:
  CubaturePointSet draw(const StudentTDensity& density, RngStream& rng) const override;
  std::string name() const override { return "stsrcr_det"; }
};

class MonteCarloRule final : public StudentTRule {
 public:
  explicit MonteCarloRule(int samples);
  CubaturePointSet draw(const StudentTDensity& density, RngStream& rng) const override;
  std::string name() const override { return "mc"; }
  int samples() const noexcept { return samples_; }

 private:
  int samples_;
};

/// Gaussian counterpart used by the Gaussian-assumed filter.
class SirRule {
 public:
  explicit SirRule(int samples);
  CubaturePointSet draw(const Vector& mean, const SpdMatrix& cov, RngStream& rng) const;
  int samples() const noexcept { return samples_; }

 private:
  int samples_;
};

/// Builds a rule by name: "sstsrcr", "stsrcr_det" or "mc". Throws DomainError otherwise.
std::unique_ptr<StudentTRule> make_student_t_rule(const std::string& name, int samples);

}  // namespace rstscf
