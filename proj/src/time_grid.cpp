#include "gsdde/time_grid.hpp"

#include <cmath>
#include <string>

#include "gsdde/error.hpp"

namespace gsdde {

namespace {

constexpr double kAlignTolerance = 1e-9;

}  // namespace

void require_valid(const TimeGrid& grid) {
  if (!(grid.horizon > 0.0) || !std::isfinite(grid.horizon)) {
    throw Error(Errc::InvalidParameter, "time horizon must be positive and finite");
  }
  if (grid.steps == 0) {
    throw Error(Errc::InvalidParameter, "step count must be at least 1");
  }
}

bool TimeGrid::aligned_with(double tau) const {
  const double ratio = tau / dt();
  return std::fabs(ratio - std::round(ratio)) <=
         kAlignTolerance * std::fmax(1.0, ratio);
}

std::size_t TimeGrid::history_steps(double tau) const {
  if (!aligned_with(tau)) {
    throw Error(Errc::InvalidParameter,
                "delay horizon " + std::to_string(tau) +
                    " is not an integer multiple of dt = " + std::to_string(dt()));
  }
  return static_cast<std::size_t>(std::llround(tau / dt()));
}

AlignedGrid align_to_delay(const TimeGrid& grid, double tau) {
  require_valid(grid);
  if (!(tau > 0.0)) {
    throw Error(Errc::NonPositiveTau, "tau must be positive");
  }
  const std::size_t limit = grid.steps * 1000;
  for (std::size_t n = grid.steps; n <= limit; ++n) {
    const TimeGrid candidate{grid.horizon, n};
    if (candidate.aligned_with(tau)) {
      return {candidate, n != grid.steps};
    }
  }
  throw Error(Errc::InvalidParameter,
              "no step count in [" + std::to_string(grid.steps) + ", " +
                  std::to_string(limit) + "] makes tau a multiple of dt");
}

}  // namespace gsdde
