#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "rstscf/errors.hpp"

namespace rstscf::cli {

namespace pt = boost::property_tree;
using tracking::ScenarioConfig;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (const char c : s + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  return out;
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, key + ": expected a number, got '" + text + "'");
  }
  return value;
}

long long parse_integer(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, key + ": expected an integer, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key, key + ": expected true or false, got '" + text + "'");
}

Vector parse_vector(const std::string& text, const std::string& key, Eigen::Index size) {
  const auto items = split_list(text);
  if (static_cast<Eigen::Index>(items.size()) != size) {
    throw ConfigError(key, key + ": expected " + std::to_string(size) + " numbers");
  }
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = parse_double(items[static_cast<std::size_t>(i)], key);
  return v;
}

// Reads one section, insisting on known keys only.
class Section {
 public:
  Section(const pt::ptree& root, std::string name, std::set<std::string> known)
      : name_(std::move(name)), known_(std::move(known)) {
    if (const auto child = root.get_child_optional(pt::ptree::path_type(name_, '\0'))) tree_ = *child;
    for (const auto& [key, value] : tree_) {
      if (!known_.count(key)) throw ConfigError(name_ + "." + key, "unknown key '" + name_ + "." + key + "'");
    }
  }

  std::optional<std::string> optional(const std::string& key) const {
    if (const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'))) return *v;
    return std::nullopt;
  }

  // `error_key` is what ConfigError::key() reports.
  std::string required(const std::string& key, const std::string& error_key) const {
    const auto v = optional(key);
    if (!v) throw ConfigError(error_key, "missing required key '" + name_ + "." + key + "' (" + error_key + ")");
    return *v;
  }

 private:
  std::string name_;
  std::set<std::string> known_;
  pt::ptree tree_;
};

}  // namespace

ExperimentSpec default_experiment() { return {}; }

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  pt::ptree root;
  try {
    pt::read_ini(path.string(), root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", "cannot read config '" + path.string() + "': " + e.message());
  }

  for (const auto& [name, child] : root) {
    static const std::set<std::string> sections = {"experiment", "scenario", "target", "platform", "prior", "filter"};
    if (!sections.count(name) && name.rfind("filter:", 0) != 0) {
      throw ConfigError(name, "unknown section [" + name + "]");
    }
    if (child.empty() && !child.data().empty()) {
      throw ConfigError(name, "key '" + name + "' outside of any section");
    }
  }

  ExperimentSpec spec;
  ScenarioConfig& cfg = spec.scenario;

  const Section experiment(root, "experiment", {"seed", "runs", "filters", "timing", "workers", "out"});
  cfg.seed = static_cast<std::uint64_t>(parse_integer(experiment.required("seed", "seed"), "seed"));
  cfg.runs = static_cast<int>(parse_integer(experiment.required("runs", "runs"), "runs"));
  spec.filters = split_list(experiment.required("filters", "filters"));
  if (const auto v = experiment.optional("timing")) spec.timing = parse_bool(*v, "timing");
  if (const auto v = experiment.optional("workers")) spec.workers = static_cast<int>(parse_integer(*v, "workers"));
  if (const auto v = experiment.optional("out")) spec.out_dir = trim(*v);

  const Section scenario(root, "scenario",
                         {"dt", "steps", "sigma_w", "sigma_v", "process_outlier_probability",
                          "process_outlier_inflation", "measurement_outlier_probability",
                          "measurement_outlier_inflation"});
  const auto num = [](const Section& s, const std::string& key, const std::string& error_key) {
    return parse_double(s.required(key, error_key), error_key);
  };
  cfg.dt_min = num(scenario, "dt", "dt");
  cfg.steps = static_cast<int>(parse_integer(scenario.required("steps", "steps"), "steps"));
  const Vector w = parse_vector(scenario.required("sigma_w", "sigma_w"), "sigma_w", 4);
  cfg.sigma_w = Eigen::Map<const Eigen::Matrix<double, 2, 2, Eigen::RowMajor>>(w.data());
  cfg.sigma_v = num(scenario, "sigma_v", "sigma_v");
  cfg.process_contamination.probability = num(scenario, "process_outlier_probability", "process_outlier_probability");
  cfg.process_contamination.inflation = num(scenario, "process_outlier_inflation", "process_outlier_inflation");
  cfg.measurement_contamination.probability =
      num(scenario, "measurement_outlier_probability", "measurement_outlier_probability");
  cfg.measurement_contamination.inflation =
      num(scenario, "measurement_outlier_inflation", "measurement_outlier_inflation");

  const Section target(root, "target", {"x", "y", "speed_knots", "course_deg"});
  cfg.target.x_km = num(target, "x", "target.x");
  cfg.target.y_km = num(target, "y", "target.y");
  cfg.target.speed_knots = num(target, "speed_knots", "target.speed_knots");
  cfg.target.course_deg = num(target, "course_deg", "target.course_deg");

  const Section platform(root, "platform",
                         {"x", "y", "speed_knots", "initial_course_deg", "final_course_deg", "manoeuvre_step"});
  cfg.platform.x_km = num(platform, "x", "platform.x");
  cfg.platform.y_km = num(platform, "y", "platform.y");
  cfg.platform.speed_knots = num(platform, "speed_knots", "platform.speed_knots");
  cfg.platform.initial_course_deg = num(platform, "initial_course_deg", "platform.initial_course_deg");
  cfg.platform.final_course_deg = num(platform, "final_course_deg", "platform.final_course_deg");
  cfg.platform.manoeuvre_step = static_cast<int>(
      parse_integer(platform.required("manoeuvre_step", "platform.manoeuvre_step"), "platform.manoeuvre_step"));

  const Section prior(root, "prior", {"p0_diag"});
  cfg.prior_diag = parse_vector(prior.required("p0_diag", "prior.p0_diag"), "prior.p0_diag", 4);

  const Section filter(root, "filter", {"nu1", "nu2", "nu3", "samples", "mc_samples"});
  cfg.dof.process = num(filter, "nu1", "nu1");
  cfg.dof.measurement = num(filter, "nu2", "nu2");
  cfg.dof.filter = num(filter, "nu3", "nu3");
  cfg.samples = static_cast<int>(parse_integer(filter.required("samples", "samples"), "samples"));
  cfg.mc_samples = static_cast<int>(parse_integer(filter.required("mc_samples", "mc_samples"), "mc_samples"));

  for (const auto& [name, child] : root) {
    if (name.rfind("filter:", 0) != 0) continue;
    CustomFilter custom;
    custom.name = trim(name.substr(7));
    if (custom.name.empty()) throw ConfigError(name, "filter section needs a name");
    const Section section(root, name, {"rule", "samples", "shared_points"});
    custom.rule = trim(section.required("rule", custom.name + ".rule"));
    if (const auto v = section.optional("samples")) {
      custom.samples = static_cast<int>(parse_integer(*v, custom.name + ".samples"));
    }
    if (const auto v = section.optional("shared_points")) {
      custom.shared_points = parse_bool(*v, custom.name + ".shared_points");
    }
    spec.custom_filters.push_back(std::move(custom));
  }

  validate(cfg);
  resolve_filters(spec);
  return spec;
}

void apply_overrides(ExperimentSpec& spec, const Overrides& o) {
  if (o.seed) spec.scenario.seed = *o.seed;
  if (o.runs) spec.scenario.runs = *o.runs;
  if (o.samples) spec.scenario.samples = *o.samples;
  if (o.workers) spec.workers = *o.workers;
  if (o.out_dir) spec.out_dir = *o.out_dir;
  if (o.filters) spec.filters = *o.filters;
  if (o.no_timing) spec.timing = false;
  if (spec.workers < 0) throw ConfigError("workers", "workers: must be >= 0");
  validate(spec.scenario);
  resolve_filters(spec);
}

std::vector<tracking::FilterSpec> resolve_filters(const ExperimentSpec& spec) {
  if (spec.filters.empty()) throw ConfigError("filters", "filters: at least one filter is required");
  std::vector<tracking::FilterSpec> out;
  std::set<std::string> seen;
  for (const auto& name : spec.filters) {
    if (!seen.insert(name).second) throw ConfigError("filters", "filters: duplicate filter '" + name + "'");
    const auto custom = std::find_if(spec.custom_filters.begin(), spec.custom_filters.end(),
                                     [&](const CustomFilter& c) { return c.name == name; });
    tracking::FilterSpec fs;
    if (custom == spec.custom_filters.end()) {
      fs = tracking::default_filter_spec(name, spec.scenario);
    } else {
      fs.name = name;
      fs.rule = custom->rule;
      fs.samples = custom->samples.value_or(custom->rule == "mc" ? spec.scenario.mc_samples : spec.scenario.samples);
      fs.shared_points = custom->shared_points;
    }
    tracking::make_filter(fs, spec.scenario);  // validates rule and sample count
    out.push_back(fs);
  }
  return out;
}

}  // namespace rstscf::cli
