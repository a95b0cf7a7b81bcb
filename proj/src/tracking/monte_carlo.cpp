#include "rstscf/tracking/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rstscf/errors.hpp"
#include "rstscf/sampling.hpp"

namespace rstscf::tracking {

namespace {

constexpr std::uint64_t kTruthKey = 0x7472757468ULL;   // "truth"
constexpr std::uint64_t kPriorKey = 0x7072696f72ULL;   // "prior"

RngStream run_stream(std::uint64_t seed, int run_index, std::uint64_t key) {
  return RngStream(seed, combine_stream(static_cast<std::uint64_t>(run_index), key));
}

// Per-run, per-filter squared errors kept for aggregation.
struct RunErrors {
  std::vector<double> pos_sq;
  std::vector<double> vel_sq;
  double seconds = 0.0;
  int timed_steps = 0;
  bool diverged = false;
};

RunErrors summarize(const RunRecord& run, const FilterTrack& track) {
  RunErrors e;
  e.diverged = track.diverged;
  for (const double s : track.step_seconds) e.seconds += s;
  e.timed_steps = static_cast<int>(track.step_seconds.size());
  if (e.diverged) return e;
  e.pos_sq.resize(run.truth.size());
  e.vel_sq.resize(run.truth.size());
  for (std::size_t k = 0; k < run.truth.size(); ++k) {
    const Vector err = run.truth[k] - track.estimates[k];
    e.pos_sq[k] = err(0) * err(0) + err(1) * err(1);
    e.vel_sq[k] = err(2) * err(2) + err(3) * err(3);
  }
  return e;
}

}  // namespace

void run_filters(const ScenarioConfig& cfg, const std::vector<FilterEntry>& filters, int run_index, RunRecord& run) {
  RngStream prior_rng = run_stream(cfg.seed, run_index, kPriorKey);
  const Matrix prior_root = cfg.prior_diag.cwiseSqrt().asDiagonal();
  const Vector initial_estimate = sample_gaussian(prior_rng, run.initial_state, prior_root);

  run.tracks.clear();
  for (const auto& entry : filters) {
    FilterTrack track;
    track.name = entry.name;
    const RunContext ctx{cfg, run, initial_estimate,
                         run_stream(cfg.seed, run_index, stream_key("filter/" + entry.name))};
    try {
      auto estimator = entry.make(ctx);
      for (int k = 1; k <= static_cast<int>(run.measurements.size()); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Vector estimate = estimator->step(k, run.measurements[static_cast<std::size_t>(k - 1)]);
        const auto stop = std::chrono::steady_clock::now();
        track.step_seconds.push_back(std::chrono::duration<double>(stop - start).count());
        if (!estimate.allFinite()) {
          track.diverged = true;
          track.divergence_reason = "non-finite estimate at step " + std::to_string(k);
          break;
        }
        track.estimates.push_back(std::move(estimate));
      }
    } catch (const Error& err) {
      track.diverged = true;
      track.divergence_reason = err.what();
    }
    run.tracks.push_back(std::move(track));
  }
}

MonteCarloResult run_monte_carlo(const ScenarioConfig& cfg, const std::vector<FilterEntry>& filters,
                                 const MonteCarloOptions& options) {
  validate(cfg);
  if (filters.empty()) throw ConfigError("filters", "filters: at least one filter is required");

  const int runs = cfg.runs;
  const std::size_t nf = filters.size();
  std::vector<std::vector<RunErrors>> errors(static_cast<std::size_t>(runs));
  MonteCarloResult result;
  if (options.keep_runs) result.runs.resize(static_cast<std::size_t>(runs));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (int s = next.fetch_add(1); s < runs; s = next.fetch_add(1)) {
      try {
        RngStream truth_rng = run_stream(cfg.seed, s, kTruthKey);
        RunRecord run = simulate_truth(truth_rng, cfg);
        run_filters(cfg, filters, s, run);
        auto& row = errors[static_cast<std::size_t>(s)];
        row.reserve(nf);
        for (const auto& track : run.tracks) row.push_back(summarize(run, track));
        if (options.keep_runs) result.runs[static_cast<std::size_t>(s)] = std::move(run);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  int workers = options.workers > 0 ? options.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, runs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MetricsTable& table = result.metrics;
  table.steps = cfg.steps;
  table.runs = runs;
  const auto steps = static_cast<std::size_t>(cfg.steps);
  for (std::size_t f = 0; f < nf; ++f) {
    FilterMetrics m;
    m.name = filters[f].name;
    std::vector<double> pos(steps, 0.0), vel(steps, 0.0);
    double seconds = 0.0;
    long timed = 0;
    for (int s = 0; s < runs; ++s) {
      const RunErrors& e = errors[static_cast<std::size_t>(s)][f];
      seconds += e.seconds;
      timed += e.timed_steps;
      if (e.diverged) {
        ++m.diverged_runs;
        continue;
      }
      ++m.included_runs;
      double run_pos = 0.0, run_vel = 0.0;
      for (std::size_t k = 0; k < steps; ++k) {
        pos[k] += e.pos_sq[k];
        vel[k] += e.vel_sq[k];
        run_pos += e.pos_sq[k];
        run_vel += e.vel_sq[k];
      }
      m.run_mse_pos.push_back(run_pos / static_cast<double>(steps));
      m.run_mse_vel.push_back(run_vel / static_cast<double>(steps));
    }
    m.rmse.pos.resize(steps);
    m.rmse.vel.resize(steps);
    const double included = static_cast<double>(m.included_runs);
    for (std::size_t k = 0; k < steps; ++k) {
      m.rmse.pos[k] = m.included_runs > 0 ? std::sqrt(pos[k] / included) : std::nan("");
      m.rmse.vel[k] = m.included_runs > 0 ? std::sqrt(vel[k] / included) : std::nan("");
    }
    m.armse_pos = armse(m.rmse.pos);
    m.armse_vel = armse(m.rmse.vel);
    m.armse_pos_se = armse_standard_error(m.run_mse_pos);
    m.armse_vel_se = armse_standard_error(m.run_mse_vel);
    m.mean_step_time_ms = timed > 0 ? 1e3 * seconds / static_cast<double>(timed) : 0.0;
    table.filters.push_back(std::move(m));
  }
  return result;
}

}  // namespace rstscf::tracking
