// Serial reference implementations of the ensemble kernels.

#include <cmath>

#include "kernels/kernels.hpp"
#include "gsdde/rng.hpp"

namespace gsdde::kernels {

void fill_stream(std::span<double> out, double sigma, double dt,
                 std::uint64_t seed, std::size_t k, std::size_t j) {
  Xoshiro256 rng(stream_seed(seed, k, j));
  BoxMullerNormal normal;
  const double scale = sigma * std::sqrt(dt);
  for (double& z : out) z = scale * normal(rng);
}

gsdde::detail::SweepPoint merge_slices(
    const std::vector<gsdde::detail::SweepPoint>& slices) {
  gsdde::detail::SweepPoint best;
  for (const auto& s : slices) gsdde::detail::keep_worst(best, s);
  return best;
}

namespace serial {

void fill_increments(std::span<double> out, std::span<const double> levels,
                     std::size_t samples, std::size_t steps, double dt,
                     std::uint64_t seed) {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    for (std::size_t j = 0; j < samples; ++j) {
      fill_stream(out.subspan((k * samples + j) * steps, steps), levels[k], dt,
                  seed, k, j);
    }
  }
}

void integrate_paths(const ValidatedModel& model, const ScenarioEnsemble& scenario,
                     const gsdde::detail::StepTables& tables,
                     std::span<Path> paths) {
  const auto& levels = scenario.volatility().levels;
  for (Path& p : paths) {
    gsdde::detail::integrate_into(p, model, tables,
                                  scenario.increments(p.level, p.sample),
                                  scenario.time(), levels[p.level]);
  }
}

void reduce_series(const PathEnsemble& ensemble, const Functional& phi,
                   EstimateSeries& series) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    gsdde::detail::estimate_at(ensemble, phi, i, series.upper[i],
                               series.lower[i], series.excluded[i]);
  }
}

std::vector<gsdde::detail::SweepPoint> sweep_slices(std::size_t count,
                                                    const SliceFn& slice) {
  std::vector<gsdde::detail::SweepPoint> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = slice(i);
  return out;
}

}  // namespace serial
}  // namespace gsdde::kernels
