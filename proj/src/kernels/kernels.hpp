#pragma once

// Data-parallel kernels. Each exists twice with identical signatures: a
// serial reference and an OpenMP version. Work is split so that every
// output element is computed by exactly the same operations in both, which
// keeps results bit-identical regardless of thread count.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gsdde/integrator.hpp"
#include "gsdde/scenario.hpp"
#include "gsdde/stability.hpp"
#include "gsdde/sublinear.hpp"

namespace gsdde::kernels {

using SliceFn = std::function<detail::SweepPoint(std::size_t)>;

#define GSDDE_KERNEL_DECLS                                                     \
  void fill_increments(std::span<double> out, std::span<const double> levels,  \
                       std::size_t samples, std::size_t steps, double dt,      \
                       std::uint64_t seed);                                    \
  void integrate_paths(const ValidatedModel& model,                            \
                       const ScenarioEnsemble& scenario,                       \
                       const gsdde::detail::StepTables& tables,                \
                       std::span<Path> paths);                                 \
  void reduce_series(const PathEnsemble& ensemble, const Functional& phi,      \
                     EstimateSeries& series);                                  \
  std::vector<gsdde::detail::SweepPoint> sweep_slices(std::size_t count,       \
                                                      const SliceFn& slice);

namespace serial {
GSDDE_KERNEL_DECLS
}  // namespace serial

namespace omp {
GSDDE_KERNEL_DECLS
}  // namespace omp

#undef GSDDE_KERNEL_DECLS

/// Fills one (k, j) stream; shared by both backends.
void fill_stream(std::span<double> out, double sigma, double dt,
                 std::uint64_t seed, std::size_t k, std::size_t j);

/// Serial left-to-right merge of per-slice results.
gsdde::detail::SweepPoint merge_slices(
    const std::vector<gsdde::detail::SweepPoint>& slices);

}  // namespace gsdde::kernels
