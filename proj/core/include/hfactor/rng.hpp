#pragma once

#include <cstdint>
#include <random>

namespace hfactor {

/// SplitMix64 finalizer: a bijective 64-bit integer mixer.
std::uint64_t mix64(std::uint64_t x);

/// Sub-seed for an independent stream (trial, probe, ...) derived from a
/// master seed. The rule is fixed: mix64(seed ^ mix64(stream + 1)).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Thin wrapper over mt19937_64 whose derived draws are implemented here, so
/// sampled output is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return p >= 1.0 || uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hfactor
