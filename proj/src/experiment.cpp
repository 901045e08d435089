#include "gsdde/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gsdde/registry.hpp"
#include "gsdde/scenario.hpp"

namespace gsdde {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::DomainError: return "DomainError";
    case Errc::NonPositiveTau: return "NonPositiveTau";
    case Errc::VolatilityOrderViolation: return "VolatilityOrderViolation";
    case Errc::DelayOutOfRange: return "DelayOutOfRange";
    case Errc::DeltaDotBoundNotLessThanOne: return "DeltaDotBoundNotLessThanOne";
    case Errc::DelayRateExceedsBound: return "DelayRateExceedsBound";
    case Errc::NonDeterministicH: return "NonDeterministicH";
    case Errc::VariableNotAllowed: return "VariableNotAllowed";
    case Errc::NonFiniteHistory: return "NonFiniteHistory";
    case Errc::ZeroLevels: return "ZeroLevels";
    case Errc::DegenerateGridRequest: return "DegenerateGridRequest";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::LookbackBeforeHistory: return "LookbackBeforeHistory";
    case Errc::AllPathsExploded: return "AllPathsExploded";
    case Errc::EmptyEnsemble: return "EmptyEnsemble";
    case Errc::GroupExploded: return "GroupExploded";
    case Errc::NonPositiveP: return "NonPositiveP";
    case Errc::NonPositiveParameter: return "NonPositiveParameter";
    case Errc::SeriesTooShort: return "SeriesTooShort";
    case Errc::ConfigError: return "ConfigError";
    case Errc::MissingKey: return "MissingKey";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::DomainError:
    case Errc::LookbackBeforeHistory:
    case Errc::AllPathsExploded:
    case Errc::GroupExploded:
    case Errc::IoError:
      return kExitRuntime;
    default:
      return kExitConfig;
  }
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

VerdictReport stability_verdict(const EstimateSeries& series,
                                const VerdictThresholds& thresholds) {
  const std::size_t size = series.size();
  if (size < kMinVerdictPoints) {
    throw Error(Errc::SeriesTooShort,
                "a verdict needs at least " + std::to_string(kMinVerdictPoints) +
                    " points, got " + std::to_string(size));
  }
  if (!(thresholds.window_fraction > 0.0 && thresholds.window_fraction <= 1.0)) {
    throw Error(Errc::InvalidParameter, "window_fraction must lie in (0, 1]");
  }
  if (series.upper.size() != size || series.lower.size() != size) {
    throw Error(Errc::InvalidParameter, "series columns differ in length");
  }

  auto window = static_cast<std::size_t>(
      std::ceil(thresholds.window_fraction * static_cast<double>(size)));
  window = std::clamp<std::size_t>(window, 1, size);
  const std::size_t first = size - window;

  double up = 0.0;
  double low = 0.0;
  for (std::size_t i = first; i < size; ++i) {
    up += series.upper[i];
    low += series.lower[i];
  }

  VerdictReport report;
  report.thresholds = thresholds;
  report.window_points = window;
  report.tail_upper = up / static_cast<double>(window);
  report.tail_lower = low / static_cast<double>(window);
  report.initial_upper = series.upper.front();

  const bool stable =
      report.tail_upper <= thresholds.stable_ratio * report.initial_upper;
  const bool unstable = report.tail_lower >= thresholds.unstable_floor;
  if (stable && !unstable) {
    report.verdict = Verdict::Stable;
  } else if (unstable && !stable) {
    report.verdict = Verdict::Unstable;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

const std::vector<std::string> kModelKeys = {
    "preset", "delay", "f",  "g",  "h", "eta", "tau", "delta", "delta_dot_bound",
    "sigma_lower_sq", "sigma_upper_sq", "K", "q1", "q2"};
const std::vector<std::string> kSimulationKeys = {"m", "n", "steps", "horizon",
                                                  "seed"};
const std::vector<std::string> kEstimatorKeys = {"functional", "exponent"};
const std::vector<std::string> kStabilityKeys = {
    "U",      "U1",     "Ubar",   "H",     "beta1", "beta2", "beta3",
    "beta4",  "alpha1", "alpha2", "c1",    "c2",    "c3",    "varpi",
    "q",      "p",      "x_min",  "x_max", "x_step", "y_min", "y_max",
    "y_step", "t_min",  "t_max",  "t_step", "tolerance"};
const std::vector<std::string> kVerdictKeys = {"window_fraction", "stable_ratio",
                                               "unstable_floor"};
const std::vector<std::string> kOutputKeys = {"out", "format", "paths",
                                              "dump_ensemble", "gnuplot"};

const std::vector<std::string> kLyapunovKeys = {
    "U", "U1", "Ubar", "H", "beta1", "beta2", "beta3", "beta4", "alpha1",
    "alpha2", "c1", "c2", "c3", "varpi", "q", "p"};

class Reader {
 public:
  explicit Reader(const KeyValueFile& file) : file_(file) {}

  const KeyValueFile::Entry* find(std::string_view key) const {
    return file_.find(key);
  }

  [[noreturn]] void fail(std::string_view key, const std::string& what,
                         Errc code = Errc::ConfigError) const {
    throw Error(code, file_.where(key) + ": " + std::string(key) + ": " + what);
  }

  bool number(std::string_view key, double& out) const {
    const auto* e = find(key);
    if (!e) return false;
    const std::string& s = e->value;
    double v = 0.0;
    const char* begin = s.data();
    if (!s.empty() && s.front() == '+') ++begin;
    const auto res = std::from_chars(begin, s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || std::isnan(v)) {
      fail(key, "expected a number, got '" + s + "'");
    }
    out = v;
    return true;
  }

  template <class Int>
  bool integer(std::string_view key, Int& out) const {
    const auto* e = find(key);
    if (!e) return false;
    const std::string& s = e->value;
    Int v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      fail(key, "expected a non-negative integer, got '" + s + "'");
    }
    out = v;
    return true;
  }

  bool expression(std::string_view key, Expr& out) const {
    const auto* e = find(key);
    if (!e) return false;
    try {
      out = parse_expr(e->value);
    } catch (const Error& err) {
      fail(key, err.what(), err.code());
    }
    return true;
  }

  bool flag(std::string_view key, bool& out) const {
    const auto* e = find(key);
    if (!e) return false;
    if (e->value == "true" || e->value == "1" || e->value == "yes") {
      out = true;
    } else if (e->value == "false" || e->value == "0" || e->value == "no") {
      out = false;
    } else {
      fail(key, "expected true or false, got '" + e->value + "'");
    }
    return true;
  }

 private:
  const KeyValueFile& file_;
};

void mark_lyapunov_provided(ExperimentConfig& c) {
  for (const auto& k : kLyapunovKeys) c.provided.insert(k);
}

void apply_preset(ExperimentConfig& c, const Reader& r) {
  const auto* entry = r.find("preset");
  double delay = 0.01;
  const bool has_delay = r.number("delay", delay);
  if (!entry) {
    if (has_delay) r.fail("delay", "only valid together with preset = example41");
    return;
  }
  RegistryModel preset;
  try {
    if (entry->value == "example41") {
      preset = example41(delay);
    } else {
      if (has_delay) r.fail("delay", "only valid together with preset = example41");
      preset = registry_model(entry->value);
    }
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError) r.fail("preset", e.what());
    throw;
  }
  c.preset = preset.name;
  c.model = preset.model;
  c.history = preset.history;
  c.lyapunov = preset.lyapunov;
  for (const char* k : {"f", "g", "h", "eta", "tau", "delta", "delta_dot_bound",
                        "sigma_lower_sq", "sigma_upper_sq", "K", "q1", "q2"}) {
    c.provided.insert(k);
  }
  mark_lyapunov_provided(c);
}

void read_axis(const Reader& r, const std::string& prefix, Axis& axis) {
  r.number(prefix + "_min", axis.min);
  r.number(prefix + "_max", axis.max);
  r.number(prefix + "_step", axis.step);
  if (!(axis.step > 0.0) || !(axis.max >= axis.min) || !std::isfinite(axis.min) ||
      !std::isfinite(axis.max)) {
    r.fail(prefix + "_step", "grid axis needs finite min <= max and step > 0");
  }
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> all;
    for (const auto* group : {&kModelKeys, &kSimulationKeys, &kEstimatorKeys,
                              &kStabilityKeys, &kVerdictKeys, &kOutputKeys}) {
      all.insert(all.end(), group->begin(), group->end());
    }
    return all;
  }();
  return keys;
}

Functional ExperimentConfig::make_functional() const {
  if (functional == "abs") return Functional::abs_power(exponent);
  return Functional::expression(parse_expr(functional));
}

ExperimentConfig parse_config(const KeyValueFile& file) {
  const auto& known = config_keys();
  for (const auto& [key, entry] : file.entries()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(Errc::ConfigError, file.source() + ":" + std::to_string(entry.line) +
                                         ": unknown key '" + key + "'");
    }
  }

  ExperimentConfig c;
  c.source = file.source();
  c.history.eta = parse_expr("0");
  const Reader r(file);
  apply_preset(c, r);

  for (const auto& [key, entry] : file.entries()) c.provided.insert(key);

  // model
  auto& model = c.model;
  r.expression("f", model.drift_f);
  r.expression("g", model.qv_coeff_g);
  r.expression("h", model.noise_h);
  r.expression("eta", c.history.eta);
  if (r.number("tau", model.delay.tau) && !r.find("delta") && !c.preset) {
    model.delay.delta = Expr::constant(model.delay.tau);
  }
  r.expression("delta", model.delay.delta);
  r.number("delta_dot_bound", model.delay.delta_dot_bound);
  r.number("sigma_lower_sq", model.vol.sigma_lower_sq);
  r.number("sigma_upper_sq", model.vol.sigma_upper_sq);
  r.number("K", model.growth_K);
  if (r.number("q1", model.growth_q1)) c.lyapunov.q1 = model.growth_q1;
  if (r.number("q2", model.growth_q2)) c.lyapunov.q2 = model.growth_q2;
  c.history.tau = model.delay.tau;

  if (!c.preset) {
    std::vector<std::string> missing;
    for (const char* k : {"f", "eta", "tau"}) {
      if (!r.find(k)) missing.emplace_back(k);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
      throw Error(Errc::MissingKey,
                  file.source() + ": missing model keys: " + list +
                      " (or set preset = example41 | linear-ou)");
    }
  }

  // simulation
  r.integer("m", c.m);
  r.integer("n", c.n);
  r.integer("steps", c.steps);
  r.number("horizon", c.horizon);
  r.integer("seed", c.seed);
  if (c.m == 0) r.fail("m", "must be at least 1", Errc::ZeroLevels);
  if (c.n == 0) r.fail("n", "must be at least 1");
  if (c.steps == 0) r.fail("steps", "must be at least 1");
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) {
    r.fail("horizon", "must be a positive number");
  }

  // estimator
  if (const auto* e = r.find("functional")) c.functional = e->value;
  r.number("exponent", c.exponent);
  try {
    (void)c.make_functional();
  } catch (const Error& e) {
    const char* key = r.find("functional") ? "functional" : "exponent";
    r.fail(key, e.what(), e.code());
  }

  // stability
  auto& l = c.lyapunov;
  r.expression("U", l.U);
  r.expression("U1", l.U1);
  r.expression("Ubar", l.Ubar);
  r.expression("H", l.H);
  r.number("beta1", l.beta1);
  r.number("beta2", l.beta2);
  r.number("beta3", l.beta3);
  r.number("beta4", l.beta4);
  r.number("alpha1", l.alpha1);
  r.number("alpha2", l.alpha2);
  r.number("c1", l.c1);
  r.number("c2", l.c2);
  r.number("c3", l.c3);
  r.number("varpi", l.varpi);
  double q = 0.0;
  if (r.number("q", q)) l.q = q;
  r.number("p", l.p);
  read_axis(r, "x", c.grid.x);
  read_axis(r, "y", c.grid.y);
  read_axis(r, "t", c.grid.t);
  r.number("tolerance", c.tolerance);
  if (!(c.tolerance >= 0.0)) r.fail("tolerance", "must be non-negative");

  // verdict
  r.number("window_fraction", c.verdict.window_fraction);
  r.number("stable_ratio", c.verdict.stable_ratio);
  r.number("unstable_floor", c.verdict.unstable_floor);
  if (!(c.verdict.window_fraction > 0.0 && c.verdict.window_fraction <= 1.0)) {
    r.fail("window_fraction", "must lie in (0, 1]");
  }

  // output
  if (const auto* e = r.find("out")) c.output.dir = e->value;
  if (const auto* e = r.find("format")) {
    if (e->value == "csv") {
      c.output.format = OutputFormat::Csv;
    } else if (e->value == "json") {
      c.output.format = OutputFormat::Json;
    } else {
      r.fail("format", "expected csv or json, got '" + e->value + "'");
    }
  }
  r.flag("paths", c.output.paths);
  r.flag("dump_ensemble", c.output.dump_ensemble);
  r.flag("gnuplot", c.output.gnuplot);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(KeyValueFile::load(path));
}

ExperimentConfig config_from_text(std::string_view text) {
  return parse_config(KeyValueFile::parse(text));
}

// ---------------------------------------------------------------------------
// Runners

namespace {

std::ofstream open_output(const std::filesystem::path& path, bool binary = false) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(Errc::IoError, "failed while writing " + path.string());
}

nlohmann::ordered_json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

nlohmann::ordered_json series_json(const EstimateSeries& s, CsvColumns columns) {
  nlohmann::ordered_json j;
  j["functional"] = s.functional;
  j["t"] = s.times;
  if (columns.upper) j["upper"] = s.upper;
  if (columns.lower) j["lower"] = s.lower;
  j["excluded_count"] = s.excluded;
  return j;
}

nlohmann::ordered_json verdict_json(const VerdictReport& v) {
  nlohmann::ordered_json j;
  j["verdict"] = verdict_name(v.verdict);
  j["tail_upper"] = number_json(v.tail_upper);
  j["tail_lower"] = number_json(v.tail_lower);
  j["initial_upper"] = number_json(v.initial_upper);
  j["window_points"] = v.window_points;
  j["thresholds"] = {{"window_fraction", v.thresholds.window_fraction},
                     {"stable_ratio", v.thresholds.stable_ratio},
                     {"unstable_floor", v.thresholds.unstable_floor},
                     {"calibration", "heuristic, from pilot runs"}};
  return j;
}

void write_series(const std::filesystem::path& base, const SimulationResult& result,
                  const ExperimentConfig& config, CsvColumns columns) {
  if (config.output.format == OutputFormat::Csv) {
    auto path = base;
    path += ".csv";
    auto out = open_output(path);
    write_estimate_csv(out, result.series, columns);
    finish(out, path);
  } else {
    auto path = base;
    path += ".json";
    auto out = open_output(path);
    auto j = series_json(result.series, columns);
    j["verdict"] = verdict_json(result.verdict);
    out << j.dump(2) << '\n';
    finish(out, path);
  }
}

void write_paths_csv(const std::filesystem::path& path, const PathEnsemble& ensemble) {
  auto out = open_output(path);
  out << "t,k,j,x\n";
  const auto& grid = ensemble.time();
  for (std::size_t k = 0; k < ensemble.levels(); ++k) {
    for (std::size_t j = 0; j < ensemble.samples(); ++j) {
      const Path& p = ensemble.path(k, j);
      for (std::size_t i = 0; i <= grid.steps && p.valid_at(i); ++i) {
        out << format_number(grid.at(static_cast<std::ptrdiff_t>(i))) << ',' << k
            << ',' << j << ',' << format_number(p.at(static_cast<std::ptrdiff_t>(i)))
            << '\n';
      }
    }
  }
  finish(out, path);
}

void write_gnuplot(const std::filesystem::path& path, const std::string& data_file,
                   CsvColumns columns, const std::string& title) {
  auto out = open_output(path);
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set title '" << title << "'\n"
      << "set xlabel 't'\n"
      << "set ylabel 'estimate'\n"
      << "plot ";
  int col = 2;
  bool first = true;
  for (bool on : {columns.upper, columns.lower}) {
    if (!on) continue;
    out << (first ? "'" + data_file + "'" : std::string(", ''")) << " using 1:" << col
        << " with lines";
    first = false;
    ++col;
  }
  out << '\n';
  finish(out, path);
}

void print_summary(std::ostream& log, const SimulationResult& r) {
  const auto& s = r.series;
  if (r.steps_adjusted) {
    log << "steps adjusted from " << r.requested_steps << " to " << r.grid.steps
        << " so that tau is a multiple of dt\n";
  }
  log << "dt = " << format_number(r.grid.dt()) << ", steps = " << r.grid.steps
      << ", horizon = " << format_number(r.grid.horizon) << '\n';
  if (s.size() > 0) {
    log << "terminal upper = " << format_number(s.upper.back())
        << ", terminal lower = " << format_number(s.lower.back()) << '\n';
  }
  log << "exploded paths = " << r.exploded
      << ", interpolated lookbacks = " << r.interpolations << '\n';
  log << "verdict = " << verdict_name(r.verdict.verdict)
      << " (tail upper " << format_number(r.verdict.tail_upper) << ", tail lower "
      << format_number(r.verdict.tail_lower) << ")\n";
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", r.wall_seconds);
  log << "wall time = " << wall << " s\n";
}

std::string missing_list(const ExperimentConfig& c,
                         std::initializer_list<const char*> keys) {
  std::string list;
  for (const char* k : keys) {
    if (!c.has(k)) list += (list.empty() ? "" : ", ") + std::string(k);
  }
  return list;
}

}  // namespace

SimulationResult simulate(const ExperimentConfig& config, Backend backend) {
  const auto start = std::chrono::steady_clock::now();
  SimulationResult result;
  result.requested_steps = config.steps;

  const auto aligned = align_to_delay(config.time_grid(), config.model.delay.tau);
  result.grid = aligned.grid;
  result.steps_adjusted = aligned.adjusted;

  const auto model = validate_model(config.model, config.history, result.grid);
  const auto phi = config.make_functional();
  const auto levels = build_volatility_grid(config.model.vol, config.m);
  auto scenario =
      generate_ensemble(levels, config.n, result.grid, config.seed, backend);
  auto ensemble = integrate_ensemble(model, scenario, backend);
  result.series = estimate_series(ensemble, phi, backend);
  result.exploded = ensemble.exploded_count();
  result.interpolations = ensemble.interpolation_count();
  if (result.series.size() >= kMinVerdictPoints) {
    result.verdict = stability_verdict(result.series, config.verdict);
  } else {
    result.verdict.thresholds = config.verdict;
  }
  if (config.output.paths) result.paths.emplace(std::move(ensemble));
  if (config.output.dump_ensemble) result.scenario.emplace(std::move(scenario));

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SimulationResult run_simulate(const ExperimentConfig& config, std::ostream& log) {
  auto result = simulate(config);
  const auto& dir = config.output.dir;
  write_series(dir / "estimates", result, config, config.columns);
  if (result.paths) write_paths_csv(dir / "paths.csv", *result.paths);
  if (result.scenario) {
    const auto path = dir / "ensemble.bin";
    auto out = open_output(path, true);
    write_ensemble_binary(out, *result.scenario);
    finish(out, path);
  }
  if (config.output.gnuplot && config.output.format == OutputFormat::Csv) {
    write_gnuplot(dir / "plot.gp", "estimates.csv", config.columns,
                  result.series.functional);
  }
  print_summary(log, result);
  return result;
}

DelayBound run_delay_bound(const ExperimentConfig& config, std::ostream& log) {
  const bool g_zero = config.model.qv_coeff_g.is_zero_literal();
  std::string missing = g_zero ? missing_list(config, {"beta1", "beta2", "beta4", "varpi"})
                               : missing_list(config, {"beta1", "beta2", "beta3",
                                                       "beta4", "varpi"});
  if (!missing.empty()) {
    throw Error(Errc::MissingKey, config.source + ": delay bound needs " + missing);
  }
  const auto& l = config.lyapunov;
  DelayBoundInputs in;
  in.beta1 = l.beta1;
  in.beta2 = l.beta2;
  in.beta3 = l.beta3;
  in.beta4 = l.beta4;
  in.varpi = l.varpi;
  in.sigma_upper = config.model.vol.sigma_upper();
  const auto bound = delay_bound(in);

  char line[128];
  const auto row = [&](const char* label, double v) {
    std::snprintf(line, sizeof line, "%-12s %.6g\n", label, v);
    log << line;
  };
  row("drift term", bound.drift_term);
  row("qv term", bound.qv_term);
  row("noise term", bound.noise_term);
  row("delay bound", bound.value);
  if (config.has("tau")) {
    log << "tau = " << format_number(config.model.delay.tau)
        << (config.model.delay.tau <= bound.value ? " is within" : " exceeds")
        << " the bound\n";
  }

  nlohmann::ordered_json j;
  j["drift_term"] = number_json(bound.drift_term);
  j["qv_term"] = number_json(bound.qv_term);
  j["noise_term"] = number_json(bound.noise_term);
  j["delay_bound"] = number_json(bound.value);
  const auto path = config.output.dir / "delay_bound.json";
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  finish(out, path);
  if (config.output.format == OutputFormat::Json) log << j.dump(2) << '\n';
  return bound;
}

bool CheckSummary::all_satisfied() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.satisfied; });
}

CheckSummary run_check(const ExperimentConfig& config, std::ostream& log) {
  const std::string missing = missing_list(
      config, {"U", "U1", "Ubar", "H", "beta1", "beta2", "beta4", "alpha1",
               "alpha2", "c1", "c2", "c3", "varpi"});
  if (!missing.empty()) {
    throw Error(Errc::MissingKey, config.source + ": check needs " + missing);
  }
  const auto aligned = align_to_delay(config.time_grid(), config.model.delay.tau);
  const auto model = validate_model(config.model, config.history, aligned.grid);
  const auto& l = config.lyapunov;
  const auto& grid = config.grid;
  const double tol = config.tolerance;

  using Runner = std::function<CheckReport()>;
  const std::vector<std::pair<std::string, Runner>> checks = {
      {"polynomial_growth",
       [&] {
         return check_polynomial_growth(model, config.model.growth_K,
                                        config.model.growth_q1,
                                        config.model.growth_q2, grid, tol);
       }},
      {"khasminskii", [&] { return check_khasminskii(l, model, grid, tol); }},
      {"delay_lipschitz",
       [&] { return check_delay_lipschitz(model, l.varpi, grid, tol); }},
      {"stability_assumption",
       [&] { return check_stability_assumption(l, model, grid, tol); }},
  };

  CheckSummary summary;
  for (const auto& [name, run] : checks) {
    try {
      summary.reports.push_back(run());
    } catch (const Error& e) {
      CheckReport failed;
      failed.name = name;
      failed.satisfied = false;
      failed.max_violation = std::numeric_limits<double>::infinity();
      failed.inequality = std::string("error ") + std::string(errc_name(e.code())) +
                          ": " + e.what();
      failed.grid = grid;
      failed.tolerance = tol;
      summary.reports.push_back(std::move(failed));
    }
  }
  summary.moment_condition =
      moment_exponent_condition(l.p, config.model.growth_q1, config.model.growth_q2,
                                l.q_effective());

  nlohmann::ordered_json j;
  j["satisfied"] = summary.all_satisfied();
  j["moment_exponent_condition"] = summary.moment_condition;
  auto reports = nlohmann::ordered_json::array();
  for (const auto& r : summary.reports) {
    log << to_text(r) << '\n';
    reports.push_back(nlohmann::ordered_json::parse(to_json(r)));
  }
  j["reports"] = std::move(reports);
  log << "moment exponent condition (p = " << format_number(l.p)
      << ", q = " << format_number(l.q_effective())
      << "): " << (summary.moment_condition ? "holds" : "fails") << '\n';
  log << (summary.all_satisfied() ? "all assumptions satisfied"
                                  : "some assumptions violated")
      << '\n';

  const auto path = config.output.dir / "check.json";
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  finish(out, path);
  if (config.output.format == OutputFormat::Json) log << j.dump(2) << '\n';
  return summary;
}

FigurePreset figure_preset(std::string_view name) {
  FigurePreset p;
  p.name = std::string(name);
  if (name == "fig41") {
    p.delay = 0.01;
    p.seed = 41;
  } else if (name == "fig42") {
    p.delay = 2.0;
    p.seed = 42;
    p.upper_column = false;
  } else if (name == "fig43") {
    p.delay = 0.08;
    p.seed = 43;
  } else {
    throw Error(Errc::ConfigError, "unknown figure '" + std::string(name) +
                                       "' (known: fig41, fig42, fig43)");
  }
  return p;
}

ExperimentConfig figure_config(const FigurePreset& preset) {
  const auto reg = example41(preset.delay);
  ExperimentConfig c;
  c.source = preset.name;
  c.preset = reg.name;
  c.model = reg.model;
  c.history = reg.history;
  c.lyapunov = reg.lyapunov;
  c.m = 5;
  c.n = 20;
  c.steps = 20000;
  c.horizon = 20.0;
  c.seed = preset.seed;
  c.functional = "abs";
  c.exponent = 1.0;
  c.verdict = preset.thresholds;
  c.columns = CsvColumns{preset.upper_column, true};
  mark_lyapunov_provided(c);
  return c;
}

SimulationResult run_reproduce(const FigurePreset& preset,
                               const ExperimentConfig& config, std::ostream& log) {
  auto result = simulate(config);
  const auto& dir = config.output.dir;
  write_series(dir / preset.name, result, config, config.columns);

  nlohmann::ordered_json meta;
  meta["figure"] = preset.name;
  meta["model"] = config.preset.value_or("custom");
  meta["f"] = config.model.drift_f.source();
  meta["h"] = config.model.noise_h.source();
  meta["eta"] = config.history.eta.source();
  meta["delay"] = config.model.delay.tau;
  meta["sigma_sq"] = {config.model.vol.sigma_lower_sq, config.model.vol.sigma_upper_sq};
  meta["m"] = config.m;
  meta["n"] = config.n;
  meta["steps"] = result.grid.steps;
  meta["horizon"] = result.grid.horizon;
  meta["dt"] = result.grid.dt();
  meta["seed"] = config.seed;
  meta["functional"] = result.series.functional;
  meta["exploded_paths"] = result.exploded;
  meta["verdict"] = verdict_json(result.verdict);
  auto meta_path = dir / preset.name;
  meta_path += ".meta.json";
  auto out = open_output(meta_path);
  out << meta.dump(2) << '\n';
  finish(out, meta_path);

  if (config.output.gnuplot && config.output.format == OutputFormat::Csv) {
    auto gp = dir / preset.name;
    gp += ".gp";
    write_gnuplot(gp, preset.name + ".csv", config.columns,
                  preset.name + ": delay " + format_number(config.model.delay.tau) +
                      ", m = " + std::to_string(config.m) +
                      ", n = " + std::to_string(config.n));
  }
  log << preset.name << ": delay = " << format_number(config.model.delay.tau)
      << ", m = " << config.m << ", n = " << config.n << ", seed = " << config.seed
      << '\n';
  print_summary(log, result);
  return result;
}

}  // namespace gsdde
