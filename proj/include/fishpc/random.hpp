#pragma once

#include <cstdint>
#include <random>

namespace fishpc {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a parent seed and stream indices.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
  return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

/// mt19937_64 with portable uniform and normal draws. The standard library
/// distributions are implementation-defined, so variates are produced here
/// to keep sampled data identical across platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
  }

  /// Standard normal (Box-Muller, second variate cached).
  double normal();

private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

} // namespace fishpc
