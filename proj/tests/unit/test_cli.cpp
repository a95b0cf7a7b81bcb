#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "rstscf/errors.hpp"

using namespace rstscf;
using namespace rstscf::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "rstscf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rstscf_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const fs::path kBenchmarkConfig = fs::path(RSTSCF_SOURCE_DIR) / "configs" / "benchmark.ini";

// benchmark.ini with the line starting with `key` removed.
fs::path config_without(const std::string& key, const fs::path& dir) {
  std::ifstream in(kBenchmarkConfig);
  const fs::path out_path = dir / "edited.ini";
  std::ofstream out(out_path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key, 0) == 0) continue;
    out << line << "\n";
  }
  return out_path;
}

double field(const std::string& text, const std::string& label) {
  const auto pos = text.find(label);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + label.size()));
}

}  // namespace

TEST_CASE("the shipped config matches the built-in defaults") {
  const ExperimentSpec file = load_experiment(kBenchmarkConfig);
  const ExperimentSpec def = default_experiment();
  const auto& a = file.scenario;
  const auto& b = def.scenario;
  CHECK(a.dt_min == b.dt_min);
  CHECK(a.steps == b.steps);
  CHECK(a.sigma_w == b.sigma_w);
  CHECK(a.sigma_v == b.sigma_v);
  CHECK(a.process_contamination.probability == b.process_contamination.probability);
  CHECK(a.process_contamination.inflation == b.process_contamination.inflation);
  CHECK(a.measurement_contamination.probability == b.measurement_contamination.probability);
  CHECK(a.measurement_contamination.inflation == b.measurement_contamination.inflation);
  CHECK(a.target.x_km == b.target.x_km);
  CHECK(a.target.speed_knots == b.target.speed_knots);
  CHECK(a.target.course_deg == b.target.course_deg);
  CHECK(a.platform.initial_course_deg == b.platform.initial_course_deg);
  CHECK(a.platform.final_course_deg == b.platform.final_course_deg);
  CHECK(a.platform.manoeuvre_step == b.platform.manoeuvre_step);
  CHECK(a.prior_diag == b.prior_diag);
  CHECK(a.dof.process == b.dof.process);
  CHECK(a.samples == b.samples);
  CHECK(a.mc_samples == b.mc_samples);
  CHECK(a.runs == b.runs);
  CHECK(file.filters == def.filters);
  CHECK(file.filters == std::vector<std::string>{"rstscf", "sif", "rstcf_det", "rstmcf"});
}

TEST_CASE("a missing key is a config error naming it") {
  const fs::path dir = scratch("missing");
  const fs::path cfg = config_without("sigma_v", dir);
  CHECK_THROWS_AS(load_experiment(cfg), ConfigError);
  const Outcome o = run({"run", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(o.code == 2);
  CHECK(o.err.find("sigma_v") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "summary.csv"));
}

TEST_CASE("unknown keys and sections are config errors") {
  const fs::path dir = scratch("unknown");
  {
    std::ofstream(dir / "a.ini") << slurp(kBenchmarkConfig) << "\n[extra]\nfoo = 1\n";
    std::ofstream(dir / "b.ini") << slurp(kBenchmarkConfig) << "\n[filter:mine]\nrule = sstsrcr\ncolour = red\n";
  }
  CHECK(run({"run", "--config", (dir / "a.ini").string()}).code == 2);
  const Outcome o = run({"run", "--config", (dir / "b.ini").string()});
  CHECK(o.code == 2);
  CHECK(o.err.find("colour") != std::string::npos);
}

TEST_CASE("identical seeds give byte-identical CSV files") {
  const fs::path dir = scratch("determinism");
  const std::vector<std::string> common{"run", "--seed", "7", "--runs", "1", "--samples", "10", "--no-timing"};
  auto first = common, second = common;
  first.insert(first.end(), {"--out", (dir / "a").string()});
  second.insert(second.end(), {"--out", (dir / "b").string()});
  REQUIRE(run(first).code == 0);
  REQUIRE(run(second).code == 0);
  for (const char* name : {"summary.csv", "rmse_series.csv"}) {
    const std::string a = slurp(dir / "a" / name);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / "b" / name));
    CHECK(a.back() == '\n');
  }
  const std::string summary = slurp(dir / "a" / "summary.csv");
  CHECK(summary.rfind("filter,armse_pos_km,armse_vel_km_per_min,mean_step_time_ms,diverged_runs\n", 0) == 0);
  for (const char* f : {"\nrstscf,", "\nsif,", "\nrstcf_det,", "\nrstmcf,"}) {
    CHECK(summary.find(f) != std::string::npos);
  }
  CHECK(summary.find(",NA,") != std::string::npos);
  const std::string series = slurp(dir / "a" / "rmse_series.csv");
  CHECK(series.rfind("k,rstscf_pos,rstscf_vel,sif_pos,sif_vel,rstcf_det_pos,rstcf_det_vel,rstmcf_pos,rstmcf_vel\n", 0) ==
        0);
  CHECK(std::count(series.begin(), series.end(), '\n') == 101);
}

TEST_CASE("filter selection") {
  const fs::path dir = scratch("filters");
  const Outcome ok = run({"run", "--runs", "1", "--samples", "3", "--filters", "sif,rstscf", "--no-timing", "--out",
                          dir.string()});
  REQUIRE(ok.code == 0);
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary.find("\nsif,") < summary.find("\nrstscf,"));
  CHECK(summary.find("rstmcf") == std::string::npos);
  CHECK(run({"run", "--runs", "1", "--filters", "sif,sif", "--out", dir.string()}).code == 2);
  const Outcome unknown = run({"run", "--runs", "1", "--filters", "ekf", "--out", dir.string()});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("ekf") != std::string::npos);
}

TEST_CASE("custom filter sections") {
  const fs::path dir = scratch("custom");
  std::string text = slurp(kBenchmarkConfig);
  const auto pos = text.find("filters");
  const auto end = text.find('\n', pos);
  text.replace(pos, end - pos, "filters = rstscf, literal");
  text += "\n[filter:literal]\nrule = sstsrcr\nsamples = 3\nshared_points = false\n";
  std::ofstream(dir / "c.ini") << text;
  const ExperimentSpec spec = load_experiment(dir / "c.ini");
  const auto resolved = resolve_filters(spec);
  REQUIRE(resolved.size() == 2);
  CHECK(resolved[1].name == "literal");
  CHECK(resolved[1].samples == 3);
  CHECK_FALSE(resolved[1].shared_points);
  CHECK(resolved[0].samples == 100);
}

TEST_CASE("environment overrides") {
  const fs::path dir = scratch("env");
  ::setenv("RSTSCF_RUNS", "1", 1);
  ::setenv("RSTSCF_SAMPLES", "2", 1);
  ::setenv("RSTSCF_OUT", dir.string().c_str(), 1);
  const Outcome o = run({"run", "--filters", "rstscf", "--no-timing"});
  ::unsetenv("RSTSCF_RUNS");
  ::unsetenv("RSTSCF_SAMPLES");
  ::unsetenv("RSTSCF_OUT");
  CHECK(o.code == 0);
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(o.out.find("runs=1 ") != std::string::npos);
}

TEST_CASE("invalid overrides") {
  CHECK(run({"run", "--runs", "0"}).code == 2);
  CHECK(run({"run", "--workers", "-1"}).code == 2);
  CHECK(run({"run", "--config", "/nonexistent/file.ini"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("check-rule") {
  const Outcome bad = run({"check-rule", "--nu", "1.5"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("DofTooSmall") != std::string::npos);
  const Outcome good = run({"check-rule"});
  CHECK(good.code == 0);
  for (const char* id : {"P1 PASS", "P2 PASS", "P3 PASS", "P4 PASS", "P5 PASS", "L  PASS"}) {
    CHECK_MESSAGE(good.out.find(id) != std::string::npos, id);
  }
}

TEST_CASE("integrate") {
  const Outcome c = run({"integrate", "cos1d", "--mu", "0", "--sigma", "1", "--nu", "5", "--rule", "sstsrcr", "-N",
                         "10000"});
  REQUIRE(c.code == 0);
  const double gap = std::abs(field(c.out, "estimate:") - field(c.out, "oracle:"));
  CHECK(gap <= 4.0 * field(c.out, "se:"));

  const Outcome m = run({"integrate", "mean", "--mu", "1.5,-2", "--sigma", "1,3", "--rule", "sstsrcr", "-N", "1"});
  REQUIRE(m.code == 0);
  CHECK(field(m.out, "gap:") <= 1e-12);

  const Outcome v = run({"integrate", "cov", "--nu", "5", "-N", "1"});
  REQUIRE(v.code == 0);
  CHECK(field(v.out, "oracle:") == doctest::Approx(5.0 / 3.0));
  CHECK(field(v.out, "gap:") <= 1e-10);

  const Outcome det = run({"integrate", "cov", "--mu", "0,0", "--sigma", "1,2", "--rule", "stsrcr_det"});
  REQUIRE(det.code == 0);
  CHECK(field(det.out, "gap:") <= 1e-12);

  CHECK(run({"integrate", "sin", "--rule", "sstsrcr"}).code == 2);
  CHECK(run({"integrate", "cos1d", "--rule", "trapezoid"}).code == 2);
  CHECK(run({"integrate", "cos1d", "--nu", "1.5"}).code == 2);
}
