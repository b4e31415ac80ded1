#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace airsea {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic random stream. The engine is std::mt19937_64 (bit-exact per
/// the standard); the uniform and normal transforms are implemented here so
/// sequences do not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream derived from (master seed, stream index); used to give each
  /// worker/chunk its own independent sequence.
  static Rng derive(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t s = master_seed;
    const std::uint64_t a = detail::splitmix64(s);
    s ^= 0xD1B54A32D192ED03ull * (stream + 1);
    const std::uint64_t b = detail::splitmix64(s);
    return Rng(a ^ (b + 0x9E3779B97F4A7C15ull));
  }

  /// Uniform on the open interval (0, 1); safe for log() and inverse CDFs.
  double unit_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (cosine branch; two uniforms per draw).
  double normal() {
    const double u1 = unit_open();
    const double u2 = unit_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace airsea
