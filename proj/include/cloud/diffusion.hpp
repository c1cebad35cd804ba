#pragma once

// Forward diffusion: x_t = sqrt(alpha_t) x_{t-1} + sqrt(1 - alpha_t) eps,
// or in one jump x_t = sqrt(abar_t) x_0 + sqrt(1 - abar_t) eps with
// abar_t = alpha_1 ... alpha_t. With cos(theta_t) = sqrt(abar_t) the jump
// is a rotation between image and noise.

#include <cstdint>
#include <span>
#include <vector>

#include "cloud/grid.hpp"
#include "cloud/noise.hpp"
#include "cloud/stats.hpp"

namespace cloud {

enum class ScheduleKind { linear_beta, cosine, custom };

const char* to_string(ScheduleKind kind);

/// Timesteps are 1-based: alpha(1) is the first step. alpha_bar(0) == 1.
struct Schedule {
  ScheduleKind kind = ScheduleKind::custom;
  std::vector<double> alphas;
  std::vector<double> alpha_bars;

  int steps() const { return static_cast<int>(alphas.size()); }
  double alpha(int t) const;
  double alpha_bar(int t) const;
  /// acos(sqrt(alpha_bar(t))), in [0, pi/2].
  double theta(int t) const;
};

/// beta_t linear from beta_start to beta_end, alpha_t = 1 - beta_t.
Schedule make_linear_beta_schedule(int steps, double beta_start = 1e-4, double beta_end = 0.02);

/// abar_t = f(t) / f(0) with f(t) = cos^2(((t/T + s)/(1 + s)) pi/2); each
/// beta_t = 1 - abar_t/abar_{t-1} is capped at max_beta so abar_T > 0.
Schedule make_cosine_schedule(int steps, double offset = 0.008, double max_beta = 0.999);

/// Arbitrary per-step alphas in [0, 1].
Schedule make_custom_schedule(std::vector<double> alphas);

/// Where the noise in each corruption comes from. Cloud noise always uses
/// the cropped (aperiodic) generator.
struct NoiseSource {
  enum class Kind { white, cloud };

  Kind kind = Kind::white;
  double delta = 0.0;
  int oversample = 3;

  static NoiseSource white() { return {}; }
  static NoiseSource cloud(double delta, int oversample = 3) { return {Kind::cloud, delta, oversample}; }

  /// Unit-std sample of the requested side from substream `stream` of `seed`.
  Grid sample(int side, std::uint64_t seed, std::uint64_t stream) const;
};

/// Hands out fresh samples from consecutive substreams of one seed.
class NoiseSampler {
 public:
  NoiseSampler(NoiseSource source, std::uint64_t seed) : source_(source), seed_(seed) {}

  Grid next(int side) { return source_.sample(side, seed_, counter_++); }
  const NoiseSource& source() const { return source_; }

 private:
  NoiseSource source_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// sqrt(keep) x + sqrt(1 - keep) eps.
Grid blend(const Grid& x, double keep, const Grid& eps);

Grid noising_step(const Grid& x_prev, int t, const Schedule& schedule, NoiseSampler& noise);

struct NoisyState {
  int t = 0;
  Grid x_t;
  Grid eps_cum;
  double theta = 0.0;
};

NoisyState jump(const Grid& x0, int t, const Schedule& schedule, const NoiseSource& source,
                std::uint64_t seed, std::uint64_t stream = 0);

struct TimeProfile {
  int t = 0;
  double theta = 0.0;
  SpectralCovarianceDiag diag;
  std::vector<ProfilePoint> profile;
  PowerLawFit fit;
};

/// Jumps every member of `set` to each requested timestep (member n at time
/// t draws substream (t << 32) | n) and measures the corrupted ensemble's
/// Fourier covariance diagonal and power-law fit.
std::vector<TimeProfile> covariance_through_time(std::span<const Grid> set, const Schedule& schedule,
                                                 const NoiseSource& source, std::span<const int> timesteps,
                                                 std::uint64_t seed, int cross_halfwidth = 1);

/// cos^2(theta) A^2 |k|^(-2 delta) + sin^2(theta) N^2: the diagonal expected
/// after white-noise corruption of a set with the given clean fit. N^2 is the
/// diagonal of unit white noise under the unnormalized transform. k = 0 is 0.
Grid white_mixture_diagonal(const PowerLawFit& clean, double theta, int side);

}  // namespace cloud
