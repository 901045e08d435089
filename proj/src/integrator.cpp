#include "gsdde/integrator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gsdde/error.hpp"
#include "kernels/kernels.hpp"

namespace gsdde {

namespace {

constexpr double kGridHitTolerance = 1e-9;

}  // namespace

PathEnsemble::PathEnsemble(TimeGrid time, std::size_t levels,
                           std::size_t samples, std::vector<Path> paths)
    : time_(time), levels_(levels), samples_(samples), paths_(std::move(paths)) {
  if (paths_.size() != levels_ * samples_) {
    throw Error(Errc::InvalidParameter, "path count does not match m * n");
  }
}

std::size_t PathEnsemble::exploded_count() const noexcept {
  std::size_t count = 0;
  for (const auto& p : paths_) count += p.exploded() ? 1 : 0;
  return count;
}

std::size_t PathEnsemble::interpolation_count() const noexcept {
  std::size_t count = 0;
  for (const auto& p : paths_) count += p.interpolations;
  return count;
}

double delayed_state(std::span<const double> known, std::size_t history_steps,
                     const InitialHistory& history, double dt, double t,
                     double delay, std::size_t* interpolations) {
  const double s = t - delay;
  const double tau = history.tau;
  if (s < -tau - 1e-12 * std::fmax(1.0, tau)) {
    throw Error(Errc::LookbackBeforeHistory,
                "lookback t - delta = " + std::to_string(s) +
                    " precedes the initial segment [-" + std::to_string(tau) +
                    ", 0]");
  }
  if (s <= 0.0) {
    return history.at(s < -tau ? -tau : s);
  }

  const double pos = s / dt;
  const double nearest = std::round(pos);
  const auto r = static_cast<std::ptrdiff_t>(history_steps);
  if (std::fabs(pos - nearest) <= kGridHitTolerance * std::fmax(1.0, pos)) {
    const auto idx = r + static_cast<std::ptrdiff_t>(nearest);
    return known[static_cast<std::size_t>(idx)];
  }
  const double lo = std::floor(pos);
  const double w = pos - lo;
  const auto idx = static_cast<std::size_t>(r + static_cast<std::ptrdiff_t>(lo));
  if (idx + 1 >= known.size()) {
    throw Error(Errc::InvalidParameter,
                "lookback at t = " + std::to_string(s) +
                    " is not yet known (negative delay?)");
  }
  if (interpolations != nullptr) ++*interpolations;
  return (1.0 - w) * known[idx] + w * known[idx + 1];
}

namespace detail {

StepTables make_step_tables(const ValidatedModel& model, const TimeGrid& grid) {
  StepTables tables;
  tables.h.resize(grid.steps);
  tables.delta.resize(grid.steps);
  for (std::size_t i = 0; i < grid.steps; ++i) {
    const double t = grid.at(static_cast<std::ptrdiff_t>(i));
    tables.h[i] = model.h(t);
    tables.delta[i] = model.delta(t);
  }
  return tables;
}

void integrate_into(Path& path, const ValidatedModel& model,
                    const StepTables& tables, std::span<const double> increments,
                    const TimeGrid& grid, double level_sigma) {
  const std::size_t r = grid.history_steps(model.tau());
  const std::size_t steps = grid.steps;
  const double dt = grid.dt();
  const double qv_dt = level_sigma * level_sigma * dt;
  const bool with_g = !model.g_is_zero();
  const InitialHistory& history = model.history();

  path.history_steps = r;
  path.values.assign(r + steps + 1, std::numeric_limits<double>::quiet_NaN());
  path.exploded_at.reset();
  path.interpolations = 0;

  for (std::size_t idx = 0; idx <= r; ++idx) {
    const double u = -static_cast<double>(r - idx) * dt;
    path.values[idx] = history.at(u);
  }

  double x = path.values[r];
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t = grid.at(static_cast<std::ptrdiff_t>(i - 1));
    const std::span<const double> known(path.values.data(), r + i);
    const double y = delayed_state(known, r, history, dt, t, tables.delta[i - 1],
                                   &path.interpolations);
    double next = x + model.f(x, y, t) * dt;
    if (with_g) next += model.g(x, y, t) * qv_dt;
    next += tables.h[i - 1] * increments[i - 1];
    if (!std::isfinite(next)) {
      path.exploded_at = i;
      return;
    }
    path.values[r + i] = next;
    x = next;
  }
}

}  // namespace detail

Path integrate_path(const ValidatedModel& model,
                    std::span<const double> increments, const TimeGrid& grid,
                    double level_sigma, std::size_t level, std::size_t sample) {
  require_valid(grid);
  if (increments.size() != grid.steps) {
    throw Error(Errc::InvalidParameter,
                "expected " + std::to_string(grid.steps) + " increments, got " +
                    std::to_string(increments.size()));
  }
  const auto tables = detail::make_step_tables(model, grid);
  Path path;
  path.level = level;
  path.sample = sample;
  detail::integrate_into(path, model, tables, increments, grid, level_sigma);
  return path;
}

PathEnsemble integrate_ensemble(const ValidatedModel& model,
                                const ScenarioEnsemble& scenario,
                                Backend backend) {
  const TimeGrid& grid = scenario.time();
  require_valid(grid);
  grid.history_steps(model.tau());  // throws unless tau is aligned

  const std::size_t m = scenario.levels();
  const std::size_t n = scenario.samples();
  std::vector<Path> paths(m * n);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      paths[k * n + j].level = k;
      paths[k * n + j].sample = j;
    }
  }
  const auto tables = detail::make_step_tables(model, grid);
  if (backend == Backend::Serial) {
    kernels::serial::integrate_paths(model, scenario, tables, paths);
  } else {
    kernels::omp::integrate_paths(model, scenario, tables, paths);
  }

  PathEnsemble ensemble(grid, m, n, std::move(paths));
  if (ensemble.exploded_count() == ensemble.paths().size()) {
    throw Error(Errc::AllPathsExploded,
                "all " + std::to_string(m * n) +
                    " paths became non-finite; the explicit scheme is unstable "
                    "for this model and step size");
  }
  return ensemble;
}

}  // namespace gsdde
