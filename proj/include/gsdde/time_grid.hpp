#pragma once

#include <cstddef>

namespace gsdde {

/// Uniform grid t_i = i * dt on [0, horizon], i = 0..steps.
struct TimeGrid {
  double horizon = 1.0;
  std::size_t steps = 1;

  double dt() const noexcept { return horizon / static_cast<double>(steps); }
  double at(std::ptrdiff_t i) const noexcept {
    return static_cast<double>(i) * dt();
  }
  std::size_t points() const noexcept { return steps + 1; }

  /// Number of grid steps spanning `tau`, valid when tau is aligned.
  std::size_t history_steps(double tau) const;
  bool aligned_with(double tau) const;
};

/// Throws InvalidParameter unless horizon > 0 and steps >= 1.
void require_valid(const TimeGrid& grid);

struct AlignedGrid {
  TimeGrid grid;
  bool adjusted = false;
};

/// Smallest step count >= grid.steps for which tau is an integer multiple of
/// dt. Throws InvalidParameter when no such count exists within a factor of
/// 1000 of the request.
AlignedGrid align_to_delay(const TimeGrid& grid, double tau);

}  // namespace gsdde
