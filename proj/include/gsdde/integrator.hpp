#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gsdde/model.hpp"
#include "gsdde/parallel.hpp"
#include "gsdde/scenario.hpp"
#include "gsdde/time_grid.hpp"

namespace gsdde {

/// One solution path on the extended grid i = -r..N, r = tau / dt.
/// Values on [-tau, 0] are eta(t_i). If the path explodes at index i, values
/// from i on are NaN.
struct Path {
  std::size_t level = 0;
  std::size_t sample = 0;
  std::size_t history_steps = 0;
  std::vector<double> values;  // values[r + i] = X(t_i)
  std::optional<std::size_t> exploded_at;
  std::size_t interpolations = 0;  // off-grid lookbacks that interpolated

  double at(std::ptrdiff_t i) const {
    return values[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(history_steps) + i)];
  }
  bool exploded() const noexcept { return exploded_at.has_value(); }
  /// True when X(t_i) is part of the finite prefix.
  bool valid_at(std::size_t i) const noexcept {
    return !exploded_at || i < *exploded_at;
  }
};

class PathEnsemble {
 public:
  PathEnsemble(TimeGrid time, std::size_t levels, std::size_t samples,
               std::vector<Path> paths);

  const TimeGrid& time() const noexcept { return time_; }
  std::size_t levels() const noexcept { return levels_; }
  std::size_t samples() const noexcept { return samples_; }
  const Path& path(std::size_t k, std::size_t j) const {
    return paths_[k * samples_ + j];
  }
  const std::vector<Path>& paths() const noexcept { return paths_; }
  std::size_t exploded_count() const noexcept;
  std::size_t interpolation_count() const noexcept;

 private:
  TimeGrid time_;
  std::size_t levels_;
  std::size_t samples_;
  std::vector<Path> paths_;
};

/// X(t - delay) given the path values known so far.
///
/// `known` holds X on indices -r..i (known[r + idx]), `t` is the current
/// time. A lookback into [-tau, 0] evaluates eta exactly; a lookback onto a
/// grid point returns the stored value; otherwise the two bracketing grid
/// values are interpolated linearly and `interpolations` is incremented.
///
/// Errors: LookbackBeforeHistory when t - delay < -tau.
double delayed_state(std::span<const double> known, std::size_t history_steps,
                     const InitialHistory& history, double dt, double t,
                     double delay, std::size_t* interpolations = nullptr);

/// Explicit Euler-Maruyama:
///   X_i = X_{i-1} + f(X_{i-1}, Y_{i-1}, t_{i-1}) dt
///       + g(X_{i-1}, Y_{i-1}, t_{i-1}) sigma^2 dt + h(t_{i-1}) zeta_i
/// with Y_{i-1} = X(t_{i-1} - delta(t_{i-1})).
/// A non-finite value stops integration and records exploded_at.
Path integrate_path(const ValidatedModel& model,
                    std::span<const double> increments, const TimeGrid& grid,
                    double level_sigma, std::size_t level = 0,
                    std::size_t sample = 0);

/// Errors: AllPathsExploded when no path stays finite, InvalidParameter on
/// grid mismatch.
PathEnsemble integrate_ensemble(const ValidatedModel& model,
                                const ScenarioEnsemble& scenario,
                                Backend backend = Backend::OpenMP);

namespace detail {

/// h(t_i), delta(t_i) for i = 0..N-1, shared by all paths of an ensemble.
struct StepTables {
  std::vector<double> h;
  std::vector<double> delta;
};

StepTables make_step_tables(const ValidatedModel& model, const TimeGrid& grid);

void integrate_into(Path& path, const ValidatedModel& model,
                    const StepTables& tables, std::span<const double> increments,
                    const TimeGrid& grid, double level_sigma);

}  // namespace detail

}  // namespace gsdde
