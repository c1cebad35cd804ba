#pragma once

// White and scale-invariant (power-law) noise fields.
//
// A scale-invariant field with scaling parameter delta has a Fourier
// covariance proportional to |k|^(-2 delta): 0 is white, 1 pink, about 1.5
// "cloud", 2 red. Fields are made by filtering white noise in the real
// Fourier domain, which yields periodic boundaries. cloud_noise generates an
// oversampled periodic field and keeps its center, which removes the
// periodicity while keeping delta.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cloud/grid.hpp"

namespace cloud {

struct NoiseSpec {
  double delta = 1.5;
  int side = 64;
  int oversample = 3;
  double target_std = 1.0;
  std::uint64_t seed = 0;
};

inline constexpr int kMinAperiodicOversample = 3;

/// Throws InputError for a negative delta, non-positive side or target_std,
/// or (when aperiodic) an oversample factor below 3.
void validate(const NoiseSpec& spec, bool aperiodic);

/// i.i.d. standard normal pixels from substream `stream` of `seed`.
Grid white_noise(int side, std::uint64_t seed, std::uint64_t stream = 0);

/// Per-pixel variance of unit white noise after the |k|^-delta filter with
/// the k = 0 mode removed: sum over k != 0 of |k|^(-2 delta), divided by N^2.
double filtered_pixel_variance(int side, double delta);

/// Filtered white noise on a torus, scaled so its expected per-pixel
/// standard deviation is spec.target_std. Exactly zero-mean.
Grid scale_invariant_noise_periodic(const NoiseSpec& spec, std::uint64_t stream = 0);

/// Central spec.side block of a periodic field of side oversample * side.
/// The scale factor is the analytic one of the large field, so the ensemble
/// standard deviation is target_std; a single sample's is not.
Grid cloud_noise(const NoiseSpec& spec, std::uint64_t stream = 0);

/// Members use streams first_stream, first_stream + 1, ...
std::vector<Grid> white_noise_batch(int side, std::uint64_t seed, std::size_t count,
                                    std::uint64_t first_stream = 0);
std::vector<Grid> periodic_noise_batch(const NoiseSpec& spec, std::size_t count,
                                       std::uint64_t first_stream = 0);

/// Ensembles of two or more cloud samples are rescaled by one constant so
/// their pooled std is exactly target_std. A single sample keeps the
/// analytic scale, since rescaling one grid by its own std would bias it.
std::vector<Grid> cloud_noise_batch(const NoiseSpec& spec, std::size_t count,
                                    std::uint64_t first_stream = 0);

/// Standard deviation of all pixels of all grids, about their common mean.
double pooled_std(std::span<const Grid> samples);

struct Renormalized {
  double scale = 1.0;
  std::vector<Grid> samples;
};

/// Multiplies every grid by one constant so the pooled std becomes target_std.
Renormalized renormalize_amplitude(std::vector<Grid> samples, double target_std);

/// Mean absolute difference across the wrap seam (first vs last row and
/// column) and between interior neighbours, pooled over an ensemble. A
/// periodic field has ratio ~1; an aperiodic crop has ratio well above 1.
struct SeamStatistics {
  double seam = 0.0;
  double interior = 0.0;
  double ratio() const { return seam / interior; }
};

SeamStatistics seam_statistics(std::span<const Grid> samples);

}  // namespace cloud
