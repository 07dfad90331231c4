#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace disg {

// Deterministic random source. mt19937_64 output is fully specified by the
// standard and the double/categorical conversions below avoid the
// implementation-defined std::*_distribution classes, so identical seeds give
// identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent substream k of a master seed (splitmix64 mixing), used to make
  // parallel rollouts deterministic regardless of scheduling.
  static Rng substream(std::uint64_t seed, std::uint64_t k);

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Index sampled proportionally to the (nonnegative) weights.
  int categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace disg
