#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rstscf::properties {

struct PropertyResult {
  std::string id;
  std::string description;
  bool passed = false;
  std::string detail;
};

struct CheckOptions {
  /// Fixes the dof of every check; when empty each check uses its own defaults.
  std::optional<double> dof;
  std::uint64_t seed = 2017;
};

/// P1: every realized point set of every rule has weights summing to one (1e-12).
PropertyResult check_weight_normalization(const CheckOptions& options);

/// P2: a single stochastic rule realization integrates 200 random cubic polynomials exactly
/// (1e-9 relative) against analytic Student's t moments.
PropertyResult check_third_degree_exactness(const CheckOptions& options);

/// P3: the mean of 1e4 single-sample evaluations of cos(a^T x) lies within 4 standard errors
/// of a quadrature reference (n = 1 and n = 2).
PropertyResult check_unbiasedness(const CheckOptions& options);

/// P4: E[r2^2] = (n+2)/(dof-4) within 2% (dof > 4 only) and a KS test at the 1% level that
/// tau = r2^2/(1+r2^2) follows Beta((n+2)/2, (dof-2)/2), 1e5 draws each. The KS test runs on
/// 1 - tau against Beta((dof-2)/2, (n+2)/2), which stays accurate when tau is close to one.
PropertyResult check_radial_law(const CheckOptions& options);

/// P5: at an equal function-evaluation budget the stochastic rule has lower variance than
/// plain Monte Carlo for cos(x), n = 1 (one-sided F test at 1%, 1e3 replications).
PropertyResult check_variance_ordering(const CheckOptions& options);

/// Gaussian-limit consistency: the stochastic rule at dof = 1e8 against the Gaussian rule
/// and closed-form Gaussian values (linear, quadratic, cos).
PropertyResult check_limit_consistency(const CheckOptions& options);

/// All of the above, in order. Throws DofTooSmall when options.dof <= 2.
std::vector<PropertyResult> run_rule_checks(const CheckOptions& options);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|. Sorts a copy of `samples`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic 1% critical value 1.6276 / sqrt(n).
double ks_critical_value_1pct(std::size_t n);

}  // namespace rstscf::properties
