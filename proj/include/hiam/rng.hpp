#pragma once

/// @file rng.hpp
/// @brief Deterministic random-number streams.
///
/// Reproducibility is a hard requirement: identical seeds must give
/// byte-identical outputs on every platform.  std::mt19937_64 is specified
/// bit-exactly by the standard, and every variate below is produced by a
/// fixed transformation of its raw output — never through the
/// implementation-defined std::*_distribution adapters.

#include <cmath>
#include <cstdint>
#include <random>

namespace hiam::rng {

/// One step of the splitmix64 sequence (advances state, returns next value).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives the seed for an independent stream from a base seed and a stream
/// index.  Ensembles use index h+1 for history h; index 0 is reserved for
/// graph construction.
inline std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t state = base ^ (0xD1B54A32D192ED03ULL * (index + 1));
  std::uint64_t s = splitmix64(state);
  return splitmix64(state) ^ s;
}

/// Seeded engine with the fixed variate transforms used across the library.
class Engine {
 public:
  explicit Engine(std::uint64_t seed) : gen_(seed) {}

  /// Raw 64-bit draw.
  std::uint64_t next() { return gen_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  /// Exponential waiting time with the given rate (> 0); strictly positive.
  double exponential(double rate) { return -std::log1p(-u01()) / rate; }

  /// Unbiased uniform integer in [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection from the top of the 64-bit range removes modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t r;
    do {
      r = gen_();
    } while (r >= limit);
    return r % bound;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hiam::rng

namespace hiam {
using rng::derive_stream_seed;
using rng::Engine;
using rng::splitmix64;
}  // namespace hiam
