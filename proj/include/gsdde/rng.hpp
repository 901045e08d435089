#pragma once

#include <array>
#include <cstdint>

namespace gsdde {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the (level, sample) stream. Depends only on its arguments, so
/// streams can be generated in any order or on any thread.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t level,
                                    std::uint64_t sample) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ level) ^
                    (sample * 0xd1b54a32d192ed03ULL));
}

/// xoshiro256** 1.0 (Blackman and Vigna). State initialized from a 64-bit
/// seed through SplitMix64.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;

  /// Uniform on (0, 1], 53 bits.
  double uniform_open0() noexcept {
    return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
  }

 private:
  std::array<std::uint64_t, 4> s_;
};

/// Standard normals by the basic Box-Muller transform. Each call to the
/// generator pair yields two variates; the second is cached.
class BoxMullerNormal {
 public:
  double operator()(Xoshiro256& rng) noexcept;

 private:
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace gsdde
