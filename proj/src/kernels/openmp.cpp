// OpenMP versions of the ensemble kernels. Each loop iteration writes a
// disjoint output element, so results do not depend on the schedule.

#include <omp.h>

#include <exception>

#include "kernels/kernels.hpp"

namespace gsdde::kernels::omp {

namespace {

// Exceptions may not leave a parallel region; keep the one from the lowest
// iteration index so the error reported matches the serial order.
class FirstError {
 public:
  void capture(std::size_t index) {
#pragma omp critical(gsdde_first_error)
    {
      if (!error_ || index < index_) {
        error_ = std::current_exception();
        index_ = index;
      }
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
  std::size_t index_ = 0;
};

}  // namespace

void fill_increments(std::span<double> out, std::span<const double> levels,
                     std::size_t samples, std::size_t steps, double dt,
                     std::uint64_t seed) {
  const auto streams = static_cast<std::ptrdiff_t>(levels.size() * samples);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < streams; ++s) {
    const auto idx = static_cast<std::size_t>(s);
    const std::size_t k = idx / samples;
    const std::size_t j = idx % samples;
    fill_stream(out.subspan(idx * steps, steps), levels[k], dt, seed, k, j);
  }
}

void integrate_paths(const ValidatedModel& model, const ScenarioEnsemble& scenario,
                     const gsdde::detail::StepTables& tables,
                     std::span<Path> paths) {
  const auto& levels = scenario.volatility().levels;
  const auto count = static_cast<std::ptrdiff_t>(paths.size());
  FirstError error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < count; ++s) {
    try {
      Path& p = paths[static_cast<std::size_t>(s)];
      gsdde::detail::integrate_into(p, model, tables,
                                    scenario.increments(p.level, p.sample),
                                    scenario.time(), levels[p.level]);
    } catch (...) {
      error.capture(static_cast<std::size_t>(s));
    }
  }
  error.rethrow();
}

void reduce_series(const PathEnsemble& ensemble, const Functional& phi,
                   EstimateSeries& series) {
  const auto count = static_cast<std::ptrdiff_t>(series.size());
  FirstError error;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < count; ++s) {
    const auto i = static_cast<std::size_t>(s);
    try {
      gsdde::detail::estimate_at(ensemble, phi, i, series.upper[i],
                                 series.lower[i], series.excluded[i]);
    } catch (...) {
      error.capture(i);
    }
  }
  error.rethrow();
}

std::vector<gsdde::detail::SweepPoint> sweep_slices(std::size_t count,
                                                    const SliceFn& slice) {
  std::vector<gsdde::detail::SweepPoint> out(count);
  FirstError error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(count); ++s) {
    const auto i = static_cast<std::size_t>(s);
    try {
      out[i] = slice(i);
    } catch (...) {
      error.capture(i);
    }
  }
  error.rethrow();
  return out;
}

}  // namespace gsdde::kernels::omp
