#include "gsdde/scenario.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "gsdde/error.hpp"
#include "kernels/kernels.hpp"

namespace gsdde {

VolatilityGrid build_volatility_grid(const VolatilityBounds& vol, std::size_t m) {
  if (m == 0) throw Error(Errc::ZeroLevels, "volatility grid needs m >= 1");
  if (!(vol.sigma_lower_sq > 0.0) || vol.sigma_lower_sq > vol.sigma_upper_sq) {
    throw Error(Errc::VolatilityOrderViolation,
                "volatility bounds must satisfy 0 < sigma_lower^2 <= sigma_upper^2");
  }
  const double lo = vol.sigma_lower();
  const double hi = vol.sigma_upper();
  VolatilityGrid grid;
  if (m == 1) {
    if (lo != hi) {
      throw Error(Errc::DegenerateGridRequest,
                  "m = 1 requires sigma_lower == sigma_upper");
    }
    grid.levels = {lo};
    return grid;
  }
  grid.levels.resize(m);
  const double width = hi - lo;
  for (std::size_t k = 0; k < m; ++k) {
    grid.levels[k] = lo + static_cast<double>(k) * width / static_cast<double>(m - 1);
  }
  grid.levels.back() = hi;
  return grid;
}

double qv_increment(const VolatilityGrid& grid, std::size_t k, double dt) {
  if (k >= grid.size()) {
    throw Error(Errc::IndexOutOfRange,
                "level " + std::to_string(k) + " outside grid of " +
                    std::to_string(grid.size()));
  }
  const double s = grid.levels[k];
  return s * s * dt;
}

ScenarioEnsemble::ScenarioEnsemble(VolatilityGrid grid, std::size_t samples,
                                   TimeGrid time, std::uint64_t seed,
                                   std::vector<double> increments)
    : grid_(std::move(grid)),
      samples_(samples),
      time_(time),
      seed_(seed),
      data_(std::move(increments)) {
  if (data_.size() != grid_.size() * samples_ * time_.steps) {
    throw Error(Errc::InvalidParameter, "increment array has the wrong size");
  }
}

std::span<const double> ScenarioEnsemble::increments(std::size_t k,
                                                     std::size_t j) const {
  if (k >= levels() || j >= samples_) {
    throw Error(Errc::IndexOutOfRange, "scenario index out of range");
  }
  return std::span<const double>(data_).subspan((k * samples_ + j) * steps(),
                                                steps());
}

ScenarioEnsemble generate_ensemble(const VolatilityGrid& grid, std::size_t samples,
                                   const TimeGrid& time, std::uint64_t seed,
                                   Backend backend) {
  if (grid.size() == 0) throw Error(Errc::ZeroLevels, "empty volatility grid");
  if (samples == 0) {
    throw Error(Errc::InvalidParameter, "samples per level must be >= 1");
  }
  require_valid(time);
  std::vector<double> data(grid.size() * samples * time.steps);
  if (backend == Backend::Serial) {
    kernels::serial::fill_increments(data, grid.levels, samples, time.steps,
                                     time.dt(), seed);
  } else {
    kernels::omp::fill_increments(data, grid.levels, samples, time.steps,
                                  time.dt(), seed);
  }
  return ScenarioEnsemble(grid, samples, time, seed, std::move(data));
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "ensemble dumps assume a little-endian host");

template <class T>
void put(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) {
    throw Error(Errc::IoError, "truncated ensemble dump");
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_ensemble_binary(std::ostream& out, const ScenarioEnsemble& ensemble) {
  out.write("GSDE", 4);
  put<std::uint32_t>(out, kEnsembleDumpVersion);
  put<std::uint64_t>(out, ensemble.levels());
  put<std::uint64_t>(out, ensemble.samples());
  put<std::uint64_t>(out, ensemble.steps());
  put<double>(out, ensemble.dt());
  put<std::uint64_t>(out, ensemble.seed());
  const auto data = ensemble.all_increments();
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw Error(Errc::IoError, "failed writing ensemble dump");
}

EnsembleDump read_ensemble_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "GSDE", 4) != 0) {
    throw Error(Errc::IoError, "not an ensemble dump (bad magic)");
  }
  EnsembleDump dump;
  dump.version = get<std::uint32_t>(in);
  if (dump.version != kEnsembleDumpVersion) {
    throw Error(Errc::IoError,
                "unsupported ensemble dump version " + std::to_string(dump.version));
  }
  dump.levels = get<std::uint64_t>(in);
  dump.samples = get<std::uint64_t>(in);
  dump.steps = get<std::uint64_t>(in);
  dump.dt = get<double>(in);
  dump.seed = get<std::uint64_t>(in);
  dump.increments.resize(dump.levels * dump.samples * dump.steps);
  if (!in.read(reinterpret_cast<char*>(dump.increments.data()),
               static_cast<std::streamsize>(dump.increments.size() * sizeof(double)))) {
    throw Error(Errc::IoError, "truncated ensemble dump payload");
  }
  return dump;
}

}  // namespace gsdde
