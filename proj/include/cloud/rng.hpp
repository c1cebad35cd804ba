#pragma once

// Reproducible normal variates.
//
// Stream identity: engine = std::mt19937_64 seeded with
// splitmix64(splitmix64(seed) ^ stream); uniforms use the top 53 bits;
// normals come from Box-Muller, emitting the cosine branch then the sine
// branch of each pair. The standard library's normal_distribution is not
// used because its algorithm is implementation-defined.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "cloud/grid.hpp"

namespace cloud {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for an independent substream, e.g. one per ensemble member.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ stream);
}

class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(derive_seed(seed, stream)) {}

  /// Uniform on (0, 1].
  double uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Fills a side x side grid in row-major order.
  Grid grid(int side) {
    Grid g(side, side);
    for (int i = 0; i < side; ++i) {
      for (int j = 0; j < side; ++j) g(i, j) = (*this)();
    }
    return g;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cloud
