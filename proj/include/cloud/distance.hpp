#pragma once

// Mahalanobis distances in the real Fourier domain relative to an idealized
// power-law reference with diagonal covariance |k|^(-2 delta), whose inverse
// weights each mode by |k|^(2 delta). The k = 0 mode has weight 0.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cloud/grid.hpp"
#include "cloud/spectral.hpp"

namespace cloud {

struct ReferenceMetric {
  double delta = 1.5;
  int side = 0;
  Grid weights;
};

ReferenceMetric make_reference_metric(int side, double delta);

double maha_point(const RealSpectralGrid& x, const RealSpectralGrid& y, const ReferenceMetric& metric);

/// Distance to the reference center (the zero spectrum).
double maha_to_center(const RealSpectralGrid& x, const ReferenceMetric& metric);

struct DistanceEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean
  std::size_t n_pairs = 0;
  std::string pairing;  // "center", "random" or "all"
};

DistanceEstimate maha_distribution_to_center(std::span<const RealSpectralGrid> samples,
                                             const ReferenceMetric& metric);

inline constexpr std::size_t kDefaultPairs = 10000;

/// Mean distance over n_pairs pairs (a[u], b[v]) with u, v drawn uniformly
/// from substream 0 of `seed`. When n_pairs >= |a| |b| every pair is used
/// once instead and pairing is "all".
DistanceEstimate maha_between_distributions(std::span<const RealSpectralGrid> a,
                                            std::span<const RealSpectralGrid> b,
                                            const ReferenceMetric& metric,
                                            std::size_t n_pairs = kDefaultPairs,
                                            std::uint64_t seed = 0);

/// rfft2 of every grid.
std::vector<RealSpectralGrid> to_real_spectra(std::span<const Grid> grids);

}  // namespace cloud
