#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gsdde/error.hpp"
#include "gsdde/experiment.hpp"
#include "gsdde/parallel.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> m;
  std::optional<std::size_t> n;
  std::optional<std::size_t> steps;
  std::optional<double> horizon;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool paths = false;
  bool dump_ensemble = false;
  bool gnuplot = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Master seed (u64)");
  cmd->add_option("--m", o.m, "Number of volatility levels")->check(CLI::PositiveNumber);
  cmd->add_option("--n", o.n, "Samples per level")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", o.steps, "Time steps N")->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", o.horizon, "Horizon T")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--paths", o.paths, "Also write paths.csv (t,k,j,x)");
  cmd->add_flag("--dump-ensemble", o.dump_ensemble, "Also write ensemble.bin");
  cmd->add_flag("--gnuplot", o.gnuplot, "Also write a gnuplot script");
}

void apply(const Overrides& o, gsdde::ExperimentConfig& c) {
  if (o.seed) c.seed = *o.seed;
  if (o.m) c.m = *o.m;
  if (o.n) c.n = *o.n;
  if (o.steps) c.steps = *o.steps;
  if (o.horizon) c.horizon = *o.horizon;
  if (o.out) c.output.dir = *o.out;
  if (o.format) {
    c.output.format =
        *o.format == "json" ? gsdde::OutputFormat::Json : gsdde::OutputFormat::Csv;
  }
  c.output.paths = c.output.paths || o.paths;
  c.output.dump_ensemble = c.output.dump_ensemble || o.dump_ensemble;
  c.output.gnuplot = c.output.gnuplot || o.gnuplot;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification toolkit for G-SDDEs"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path;
  std::string figure;

  auto* simulate = app.add_subcommand("simulate", "Simulate and estimate upper/lower expectations");
  simulate->add_option("config", config_path, "Config file")->required();
  add_overrides(simulate, overrides);

  auto* bound = app.add_subcommand("delay-bound", "Admissible delay from the stability constants");
  bound->add_option("config", config_path, "Config file")->required();
  add_overrides(bound, overrides);

  auto* check = app.add_subcommand("check", "Grid-check the four model assumptions");
  check->add_option("config", config_path, "Config file")->required();
  add_overrides(check, overrides);

  auto* reproduce = app.add_subcommand("reproduce", "Regenerate a figure's data series");
  reproduce->add_option("figure", figure, "fig41, fig42 or fig43")
      ->required()
      ->check(CLI::IsMember({"fig41", "fig42", "fig43"}));
  add_overrides(reproduce, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gsdde::kExitConfig;
  }

  try {
    gsdde::apply_thread_cap_from_env();

    if (reproduce->parsed()) {
      const auto preset = gsdde::figure_preset(figure);
      auto config = gsdde::figure_config(preset);
      apply(overrides, config);
      gsdde::run_reproduce(preset, config, std::cout);
      return gsdde::kExitOk;
    }

    auto config = gsdde::load_config(config_path);
    apply(overrides, config);
    if (simulate->parsed()) {
      gsdde::run_simulate(config, std::cout);
    } else if (bound->parsed()) {
      gsdde::run_delay_bound(config, std::cout);
    } else if (check->parsed()) {
      const auto summary = gsdde::run_check(config, std::cout);
      return summary.all_satisfied() ? gsdde::kExitOk : gsdde::kExitCheckFailed;
    }
    return gsdde::kExitOk;
  } catch (const gsdde::Error& e) {
    std::cerr << "error [" << gsdde::errc_name(e.code()) << "]: " << e.what() << '\n';
    if (e.code() == gsdde::Errc::AllPathsExploded) {
      std::cerr << "hint: reduce the step size (--steps) or the horizon, or check "
                   "the growth of f and g\n";
    }
    return gsdde::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gsdde::kExitRuntime;
  }
}
