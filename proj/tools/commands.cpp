#include <CLI11.hpp>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <ostream>

#include "cli.hpp"
#include "rstscf/errors.hpp"
#include "rstscf/integrators.hpp"
#include "rstscf/properties.hpp"
#include "rstscf/reference.hpp"
#include "rstscf/tracking/monte_carlo.hpp"

namespace rstscf::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

std::string format_value(double v) { return std::isfinite(v) ? fmt::format("{:.6f}", v) : std::string("nan"); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) throw Error("cannot write " + path.string());
}

int cmd_run(const std::optional<std::string>& config, const Overrides& overrides, std::ostream& out) {
  ExperimentSpec spec = config ? load_experiment(*config) : default_experiment();
  apply_overrides(spec, overrides);
  std::vector<tracking::FilterEntry> entries;
  for (const auto& fs : resolve_filters(spec)) entries.push_back(tracking::make_filter(fs, spec.scenario));

  const auto result = tracking::run_monte_carlo(spec.scenario, entries, {spec.workers, false});

  std::filesystem::create_directories(spec.out_dir);
  const std::string summary = summary_csv(result.metrics, spec.timing);
  write_file(spec.out_dir / "summary.csv", summary);
  write_file(spec.out_dir / "rmse_series.csv", series_csv(result.metrics));

  fmt::print(out, "{:<12} {:>14} {:>14} {:>10} {:>9}\n", "filter", "ARMSE_pos(km)", "ARMSE_vel", "ms/step",
             "diverged");
  for (const auto& m : result.metrics.filters) {
    fmt::print(out, "{:<12} {:>14.4f} {:>14.4f} {:>10} {:>9}\n", m.name, m.armse_pos, m.armse_vel,
               spec.timing ? fmt::format("{:.4f}", m.mean_step_time_ms) : std::string("NA"), m.diverged_runs);
  }
  fmt::print(out, "runs={} steps={} seed={} -> {}\n", result.metrics.runs, result.metrics.steps, spec.scenario.seed,
             spec.out_dir.string());
  return kExitOk;
}

int cmd_check_rule(std::optional<double> dof, std::uint64_t seed, std::ostream& out) {
  properties::CheckOptions options;
  options.dof = dof;
  options.seed = seed;
  const auto results = properties::run_rule_checks(options);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    fmt::print(out, "{:<2} {} {}: {}\n", r.id, r.passed ? "PASS" : "FAIL", r.description, r.detail);
  }
  fmt::print(out, "{}\n", all ? "all properties passed" : "property failures");
  return all ? kExitOk : kExitFailure;
}

struct IntegrateArgs {
  std::string integrand;
  std::vector<double> mu{0.0};
  std::vector<double> sigma{1.0};
  double dof = 5.0;
  std::string rule = "sstsrcr";
  int samples = 100;
  std::uint64_t seed = 1;
};

// Draws one independent realization of `rule` (the deterministic rule has only one).
CubaturePointSet draw_once(const std::string& rule, const StudentTDensity& density, const SpdMatrix& gaussian_cov,
                           RngStream& rng) {
  if (rule == "sstsrcr") return build_sstsrcr_points(rng, density);
  if (rule == "mc") return build_mc_points(rng, density, 1);
  if (rule == "sir") return build_sir_points(rng, density.mean, gaussian_cov);
  return deterministic_stsrcr_points(density);
}

int cmd_integrate(const IntegrateArgs& args, std::ostream& out) {
  static const std::vector<std::string> rules = {"sstsrcr", "stsrcr_det", "mc", "sir"};
  if (std::find(rules.begin(), rules.end(), args.rule) == rules.end()) {
    throw ConfigError("rule", "unknown rule '" + args.rule + "' (expected sstsrcr, stsrcr_det, mc or sir)");
  }
  if (args.mu.size() != args.sigma.size()) throw ConfigError("sigma", "--mu and --sigma need the same length");
  if (args.samples < 1) throw ConfigError("samples", "sample count must be >= 1");
  const auto n = static_cast<Eigen::Index>(args.mu.size());
  const Vector mean = Eigen::Map<const Vector>(args.mu.data(), n);
  const Vector sd = Eigen::Map<const Vector>(args.sigma.data(), n);
  const Matrix scale = sd.array().square().matrix().asDiagonal();
  const bool gaussian = args.rule == "sir";
  if (!gaussian && !(args.dof > 2.0)) throw DofTooSmall("dof must be > 2");
  // The Gaussian rule integrates against N(mean, scale).
  const StudentTDensity density(mean, SpdMatrix(scale), gaussian ? 1e300 : args.dof);
  const SpdMatrix gaussian_cov(scale);
  const Matrix cov = gaussian ? scale : density.covariance();

  Integrand g;
  Vector oracle;
  if (args.integrand == "cos1d") {
    if (n != 1) throw ConfigError("mu", "cos1d is one-dimensional");
    g = [](const Vector& x) { return Vector::Constant(1, std::cos(x(0))); };
    const Vector a = Vector::Constant(1, 1.0);
    oracle = Vector::Constant(1, gaussian ? reference::gaussian_cos_expectation(a, mean, scale)
                                          : reference::student_t_cos_expectation(a, mean, scale, args.dof));
  } else if (args.integrand == "mean") {
    g = [](const Vector& x) { return x; };
    oracle = mean;
  } else if (args.integrand == "cov") {
    g = [mean](const Vector& x) -> Vector {
      const Vector d = x - mean;
      const Matrix outer = d * d.transpose();
      return Eigen::Map<const Vector>(outer.data(), outer.size());
    };
    oracle = Eigen::Map<const Vector>(cov.data(), cov.size());
  } else {
    throw ConfigError("integrand", "unknown integrand '" + args.integrand + "' (expected cos1d, mean or cov)");
  }

  RngStream rng(args.seed, stream_key("integrate/" + args.rule));
  const int draws = args.rule == "stsrcr_det" ? 1 : args.samples;
  std::vector<Vector> values;
  values.reserve(static_cast<std::size_t>(draws));
  for (int i = 0; i < draws; ++i) values.push_back(apply_rule(draw_once(args.rule, density, gaussian_cov, rng), g));
  Vector estimate = Vector::Zero(oracle.size());
  for (const auto& v : values) estimate += v;
  estimate /= static_cast<double>(draws);
  Vector se = Vector::Zero(oracle.size());
  if (draws > 1) {
    for (const auto& v : values) se += (v - estimate).array().square().matrix();
    se = (se / static_cast<double>(draws - 1) / static_cast<double>(draws)).cwiseSqrt();
  }

  const auto join = [](const Vector& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt::format("{:.10g}", v(i));
    return s;
  };
  fmt::print(out, "integrand: {}  rule: {}  samples: {}  dof: {}\n", args.integrand, args.rule, draws,
             gaussian ? std::string("inf") : fmt::format("{}", args.dof));
  fmt::print(out, "estimate: {}\n", join(estimate));
  fmt::print(out, "oracle:   {}\n", join(oracle));
  fmt::print(out, "gap:      {:.3e}\n", (estimate - oracle).cwiseAbs().maxCoeff());
  fmt::print(out, "se:       {}\n", join(se));
  return kExitOk;
}

}  // namespace

std::string summary_csv(const tracking::MetricsTable& table, bool timing) {
  std::string s = "filter,armse_pos_km,armse_vel_km_per_min,mean_step_time_ms,diverged_runs\n";
  for (const auto& m : table.filters) {
    s += fmt::format("{},{},{},{},{}\n", m.name, format_value(m.armse_pos), format_value(m.armse_vel),
                     timing ? format_value(m.mean_step_time_ms) : std::string("NA"), m.diverged_runs);
  }
  return s;
}

std::string series_csv(const tracking::MetricsTable& table) {
  std::string s = "k";
  for (const auto& m : table.filters) s += fmt::format(",{}_pos,{}_vel", m.name, m.name);
  s += "\n";
  for (int k = 0; k < table.steps; ++k) {
    s += std::to_string(k + 1);
    for (const auto& m : table.filters) {
      const auto i = static_cast<std::size_t>(k);
      s += "," + format_value(m.rmse.pos[i]) + "," + format_value(m.rmse.vel[i]);
    }
    s += "\n";
  }
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic Student's t integration rules and robust filters"};
  app.require_subcommand(1);

  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs, samples, workers;
  std::optional<std::string> out_dir;
  std::vector<std::string> filters;
  bool no_timing = false;
  auto* run = app.add_subcommand("run", "Run the bearings-only Monte Carlo benchmark");
  run->add_option("--config", config, "INI experiment file (defaults: built-in benchmark)");
  run->add_option("--seed", seed, "Master seed")->envname("RSTSCF_SEED");
  run->add_option("--runs", runs, "Monte Carlo runs M")->envname("RSTSCF_RUNS");
  run->add_option("--samples", samples, "Stochastic rule sample count N")->envname("RSTSCF_SAMPLES");
  run->add_option("--out", out_dir, "Output directory")->envname("RSTSCF_OUT");
  run->add_option("--workers", workers, "Worker threads (0: all cores)")->envname("RSTSCF_WORKERS");
  run->add_option("--filters", filters, "Comma-separated filter names")->delimiter(',');
  run->add_flag("--no-timing", no_timing, "Write NA instead of wall-clock step times");

  std::optional<double> nu;
  std::uint64_t check_seed = properties::CheckOptions{}.seed;
  auto* check = app.add_subcommand("check-rule", "Run the integration rule property checks");
  check->add_option("--nu", nu, "Fix the dof of every check");
  check->add_option("--seed", check_seed, "Seed");

  IntegrateArgs iargs;
  auto* integrate = app.add_subcommand("integrate", "Integrate a test function against a Student's t density");
  integrate->add_option("integrand", iargs.integrand, "cos1d, mean or cov")->required();
  integrate->add_option("--mu", iargs.mu, "Mean (comma-separated)")->delimiter(',');
  integrate->add_option("--sigma", iargs.sigma, "Scale standard deviations (comma-separated)")->delimiter(',');
  integrate->add_option("--nu", iargs.dof, "Degrees of freedom");
  integrate->add_option("--rule", iargs.rule, "sstsrcr, stsrcr_det, mc or sir");
  integrate->add_option("-N,--samples", iargs.samples, "Rule samples");
  integrate->add_option("--seed", iargs.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (run->parsed()) {
      Overrides o{seed, runs, samples, workers, out_dir, std::nullopt, no_timing};
      if (!filters.empty()) o.filters = filters;
      return cmd_run(config, o, out);
    }
    if (check->parsed()) return cmd_check_rule(nu, check_seed, out);
    return cmd_integrate(iargs, out);
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DofTooSmall& e) {
    err << "error: DofTooSmall: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace rstscf::cli
