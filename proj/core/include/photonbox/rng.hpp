#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace photonbox {

/// SplitMix64 finalizer. Bijective on 64-bit integers, good avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed. Stream k of base b
/// is stable across runs and platforms, so trajectory i can always be
/// regenerated in isolation.
inline constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

/// Deterministic random source. All variate transforms are spelled out here
/// rather than taken from <random> distributions, whose output sequences the
/// standard leaves implementation-defined. The mt19937_64 engine itself is
/// fully specified, so streams are bit-identical across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exponential holding time with the given rate [1/s].
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Number of failures before the first success in Bernoulli(p) trials.
  /// Used to skip empty arrival slots in one draw.
  std::uint64_t geometric_failures(double p) {
    if (p >= 1.0) return 0;
    double u = uniform();
    double g = std::floor(std::log1p(-u) / std::log1p(-p));
    return static_cast<std::uint64_t>(g);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace photonbox
