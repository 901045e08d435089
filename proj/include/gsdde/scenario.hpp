#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gsdde/model.hpp"
#include "gsdde/parallel.hpp"
#include "gsdde/time_grid.hpp"

namespace gsdde {

/// Equally spaced volatility levels (standard-deviation units) from
/// sigma_lower to sigma_upper.
struct VolatilityGrid {
  std::vector<double> levels;

  std::size_t size() const noexcept { return levels.size(); }
  double lower() const { return levels.front(); }
  double upper() const { return levels.back(); }
};

/// Errors: ZeroLevels (m = 0), DegenerateGridRequest (m = 1 with
/// sigma_lower != sigma_upper). When sigma_lower == sigma_upper any m is
/// accepted and every level equals sigma.
VolatilityGrid build_volatility_grid(const VolatilityBounds& vol, std::size_t m);

/// Quadratic-variation increment (sigma^k)^2 dt of level k (0-based).
double qv_increment(const VolatilityGrid& grid, std::size_t k, double dt);

/// Gaussian increments zeta[k][j][i] ~ N(0, (sigma^k)^2 dt), stored row-major
/// in (k, j, i) order.
class ScenarioEnsemble {
 public:
  ScenarioEnsemble(VolatilityGrid grid, std::size_t samples, TimeGrid time,
                   std::uint64_t seed, std::vector<double> increments);

  const VolatilityGrid& volatility() const noexcept { return grid_; }
  std::size_t levels() const noexcept { return grid_.size(); }
  std::size_t samples() const noexcept { return samples_; }
  std::size_t steps() const noexcept { return time_.steps; }
  const TimeGrid& time() const noexcept { return time_; }
  double dt() const noexcept { return time_.dt(); }
  std::uint64_t seed() const noexcept { return seed_; }

  std::span<const double> increments(std::size_t k, std::size_t j) const;
  std::span<const double> all_increments() const noexcept { return data_; }
  double qv_increment(std::size_t k) const {
    return gsdde::qv_increment(grid_, k, dt());
  }

 private:
  VolatilityGrid grid_;
  std::size_t samples_;
  TimeGrid time_;
  std::uint64_t seed_;
  std::vector<double> data_;
};

/// Stream (k, j) is seeded by stream_seed(seed, k, j) and filled with
/// sigma^k * sqrt(dt) * Z, Z from Box-Muller over xoshiro256**.
ScenarioEnsemble generate_ensemble(const VolatilityGrid& grid,
                                   std::size_t samples, const TimeGrid& time,
                                   std::uint64_t seed,
                                   Backend backend = Backend::OpenMP);

// Binary dump: "GSDE", u32 version, u64 m, u64 n, u64 N, f64 dt, u64 seed,
// then m*n*N f64 increments in (k, j, i) order. All little-endian.
inline constexpr std::uint32_t kEnsembleDumpVersion = 1;

struct EnsembleDump {
  std::uint32_t version = kEnsembleDumpVersion;
  std::uint64_t levels = 0;
  std::uint64_t samples = 0;
  std::uint64_t steps = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> increments;
};

void write_ensemble_binary(std::ostream& out, const ScenarioEnsemble& ensemble);
EnsembleDump read_ensemble_binary(std::istream& in);

}  // namespace gsdde
