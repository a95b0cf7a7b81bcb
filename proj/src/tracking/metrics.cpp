#include "rstscf/tracking/metrics.hpp"

#include <cmath>
#include <limits>

#include "rstscf/errors.hpp"

namespace rstscf::tracking {

RmseSeries rmse_series(const std::vector<std::vector<Vector>>& truths,
                       const std::vector<std::vector<Vector>>& estimates) {
  if (truths.size() != estimates.size()) throw LengthMismatch("rmse_series: run counts differ");
  RmseSeries out;
  if (truths.empty()) return out;
  const std::size_t steps = truths.front().size();
  std::vector<double> pos(steps, 0.0);
  std::vector<double> vel(steps, 0.0);
  for (std::size_t s = 0; s < truths.size(); ++s) {
    if (truths[s].size() != steps || estimates[s].size() != steps) {
      throw LengthMismatch("rmse_series: run " + std::to_string(s) + " has a different length");
    }
    for (std::size_t k = 0; k < steps; ++k) {
      const Vector err = truths[s][k] - estimates[s][k];
      if (err.size() != 4) throw LengthMismatch("rmse_series: states must be 4-vectors");
      pos[k] += err(0) * err(0) + err(1) * err(1);
      vel[k] += err(2) * err(2) + err(3) * err(3);
    }
  }
  const double m = static_cast<double>(truths.size());
  out.pos.resize(steps);
  out.vel.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    out.pos[k] = std::sqrt(pos[k] / m);
    out.vel[k] = std::sqrt(vel[k] / m);
  }
  return out;
}

double armse(const std::vector<double>& rmse) {
  if (rmse.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (const double r : rmse) sum += r * r;
  return std::sqrt(sum / static_cast<double>(rmse.size()));
}

double armse_standard_error(const std::vector<double>& run_mse) {
  const std::size_t m = run_mse.size();
  if (m < 2) return 0.0;
  double mean = 0.0;
  for (const double e : run_mse) mean += e;
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (const double e : run_mse) var += (e - mean) * (e - mean);
  var /= static_cast<double>(m - 1);
  if (mean <= 0.0) return 0.0;
  return std::sqrt(var / static_cast<double>(m)) / (2.0 * std::sqrt(mean));
}

const FilterMetrics& MetricsTable::at(const std::string& name) const {
  for (const auto& f : filters) {
    if (f.name == name) return f;
  }
  throw DomainError("no metrics for filter '" + name + "'");
}

}  // namespace rstscf::tracking
