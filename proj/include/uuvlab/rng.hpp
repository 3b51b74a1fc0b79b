#pragma once

#include <cstdint>
#include <random>

#include "uuvlab/vec3.hpp"

namespace uuvlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic stream derived from a key tuple. Streams for distinct
/// tuples are independent regardless of construction or call order, which
/// keeps sampling identical across worker counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
               std::uint64_t c = 0) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ splitmix64(a + 0x1ULL));
    k = splitmix64(k ^ splitmix64(b + 0x2ULL));
    k = splitmix64(k ^ splitmix64(c + 0x3ULL));
    gen_.seed(k);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  double normal(double mean = 0.0, double stddev = 1.0) {
    // One-sample Box-Muller; avoids the cached-pair state of
    // std::normal_distribution so draws stay stream-position addressable.
    const double u1 = uniform(1e-300, 1.0);
    const double u2 = uniform(0.0, 1.0);
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + stddev * z;
  }

  std::uint64_t bits() { return gen_(); }

  /// Uniform direction on the unit sphere.
  Vec3 unitSphere() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * 3.14159265358979323846);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace uuvlab
