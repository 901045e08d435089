#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gsdde/error.hpp"
#include "gsdde/integrator.hpp"
#include "gsdde/keyvalue.hpp"
#include "gsdde/model.hpp"
#include "gsdde/parallel.hpp"
#include "gsdde/scenario.hpp"
#include "gsdde/stability.hpp"
#include "gsdde/sublinear.hpp"

namespace gsdde {

enum class Verdict { Stable, Unstable, Inconclusive };
std::string_view verdict_name(Verdict v) noexcept;

/// Heuristic thresholds, calibrated on pilot runs of the built-in example.
struct VerdictThresholds {
  double window_fraction = 0.2;
  double stable_ratio = 0.05;
  double unstable_floor = 0.25;
};

struct VerdictReport {
  Verdict verdict = Verdict::Inconclusive;
  double tail_upper = 0.0;
  double tail_lower = 0.0;
  double initial_upper = 0.0;
  std::size_t window_points = 0;
  VerdictThresholds thresholds;
};

inline constexpr std::size_t kMinVerdictPoints = 10;

/// Stable iff mean(upper over the final window) <= stable_ratio * upper[0];
/// Unstable iff mean(lower over the final window) >= unstable_floor.
/// Both or neither give Inconclusive. Errors: SeriesTooShort, InvalidParameter.
VerdictReport stability_verdict(const EstimateSeries& series,
                                const VerdictThresholds& thresholds = {});

enum class OutputFormat { Csv, Json };

struct OutputSettings {
  std::filesystem::path dir = ".";
  OutputFormat format = OutputFormat::Csv;
  bool paths = false;          // paths.csv with t,k,j,x
  bool dump_ensemble = false;  // ensemble.bin
  bool gnuplot = false;        // plot.gp
};

struct ExperimentConfig {
  std::string source = "<defaults>";
  std::optional<std::string> preset;

  GsddeModel model;
  InitialHistory history;

  std::size_t m = 5;
  std::size_t n = 20;
  std::size_t steps = 20000;
  double horizon = 20.0;
  std::uint64_t seed = 42;

  std::string functional = "abs";  // "abs" or an expression in x
  double exponent = 1.0;

  LyapunovSpec lyapunov;
  CheckGrid grid = default_check_grid();
  double tolerance = kDefaultCheckTolerance;

  VerdictThresholds verdict;
  CsvColumns columns;
  OutputSettings output;

  /// Keys that received a value, from the file or from the preset.
  std::set<std::string, std::less<>> provided;

  bool has(std::string_view key) const { return provided.find(key) != provided.end(); }
  Functional make_functional() const;
  TimeGrid time_grid() const { return TimeGrid{horizon, steps}; }
};

/// Errors: ConfigError / MissingKey (with file:line), plus the parse errors
/// of any expression value.
ExperimentConfig parse_config(const KeyValueFile& file);
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_text(std::string_view text);

/// Every key accepted in a config file.
const std::vector<std::string>& config_keys();

struct SimulationResult {
  TimeGrid grid;
  std::size_t requested_steps = 0;
  bool steps_adjusted = false;
  EstimateSeries series;
  std::size_t exploded = 0;
  std::size_t interpolations = 0;
  double wall_seconds = 0.0;
  VerdictReport verdict;
  std::optional<PathEnsemble> paths;         // kept when output.paths
  std::optional<ScenarioEnsemble> scenario;  // kept when output.dump_ensemble
};

/// validate -> align steps to tau -> volatility grid -> ensemble ->
/// integrate -> estimate. No I/O.
SimulationResult simulate(const ExperimentConfig& config,
                          Backend backend = Backend::OpenMP);

/// simulate() plus the output files in config.output.dir and a summary on
/// `log`. Files are written serially and carry no timing information.
SimulationResult run_simulate(const ExperimentConfig& config, std::ostream& log);

/// Errors: MissingKey naming every absent constant.
DelayBound run_delay_bound(const ExperimentConfig& config, std::ostream& log);

struct CheckSummary {
  std::vector<CheckReport> reports;
  bool moment_condition = false;
  bool all_satisfied() const;
};

/// All four assumption checks, never short-circuited.
CheckSummary run_check(const ExperimentConfig& config, std::ostream& log);

struct FigurePreset {
  std::string name;
  double delay = 0.0;
  std::uint64_t seed = 0;
  bool upper_column = true;
  VerdictThresholds thresholds;
};

/// fig41 (delay 0.01, seed 41), fig42 (delay 2, seed 42, lower only),
/// fig43 (delay 0.08, seed 43). Errors: ConfigError for other names.
FigurePreset figure_preset(std::string_view name);
ExperimentConfig figure_config(const FigurePreset& preset);

/// Writes <name>.csv (or .json) and <name>.meta.json into config.output.dir.
SimulationResult run_reproduce(const FigurePreset& preset,
                               const ExperimentConfig& config, std::ostream& log);

/// 0 ok, 1 check failed, 2 configuration error, 3 runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;
int exit_code_for(Errc code) noexcept;

/// Shortest round-trip decimal text of `v`.
std::string format_number(double v);

}  // namespace gsdde
