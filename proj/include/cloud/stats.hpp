#pragma once

// Low-order statistics of grid ensembles: pixel moments, real-space
// covariance slices, Fourier-space covariance diagonals and the log-log
// power-law fit of the radial profile.
//
// All reductions are over fixed chunks of the ensemble summed in index
// order, so results do not depend on thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "cloud/grid.hpp"
#include "cloud/image_set.hpp"

namespace cloud {

struct Moments {
  Grid mean;
  Grid std;  // population convention (divide by n)
};

Moments pixelwise_moments(std::span<const Grid> set);

struct CovarianceSlice {
  Index2 anchor;
  Grid values;  // values(i, j) = E[(x_ij - mu_ij)(x_anchor - mu_anchor)]
};

CovarianceSlice covariance_slice(std::span<const Grid> set, Index2 anchor);

/// Entries with |kx| <= halfwidth or |ky| <= halfwidth, plus k = 0.
/// A negative halfwidth masks only k = 0.
Mask central_cross_mask(int side, int halfwidth);

struct SpectralCovarianceDiag {
  Grid values;                 // E|Z - M|^2 per centered frequency index
  Mask mask;                   // true = excluded from fits
  SpectralGrid mean_spectrum;  // M = F(pixelwise mean)
  int cross_halfwidth = 1;
  std::size_t count = 0;
};

SpectralCovarianceDiag spectral_covariance_diag(std::span<const Grid> set, int cross_halfwidth = 1);

struct SpectralCovarianceProbe {
  Index2 anchor;
  SpectralGrid gamma;  // E[(Z_p - M_p) conj(Z_a - M_a)]
  SpectralGrid c;      // E[(Z_p - M_p) (Z_a - M_a)]
};

/// Off-diagonal covariance slices at a fixed anchor. The anchor must not be k = 0.
SpectralCovarianceProbe spectral_covariance_offdiag_probe(std::span<const Grid> set, Index2 anchor);

/// |F(x - mean(x))|^2 for a single grid.
Grid periodogram(const Grid& x);

struct ProfilePoint {
  Index2 index;
  double log_k = 0.0;
  double log_gamma = 0.0;  // NaN for masked non-positive values
  bool masked = false;
};

/// One point per index with |k| > 0, in row-major order.
std::vector<ProfilePoint> radial_profile(const Grid& diag, const Mask& mask);
std::vector<ProfilePoint> radial_profile(const SpectralCovarianceDiag& diag);

struct PowerLawFit {
  double amplitude = 0.0;  // A
  double delta = 0.0;      // scaling parameter
  double slope = 0.0;      // = -2 delta
  double intercept = 0.0;  // = 2 ln A
  double r2 = 0.0;
  std::size_t n_points = 0;
};

inline constexpr std::size_t kMinFitPoints = 10;

/// Ordinary least squares of log_gamma on log_k over unmasked points.
PowerLawFit fit_power_law(std::span<const ProfilePoint> profile);

/// spectral_covariance_diag -> radial_profile -> fit_power_law.
PowerLawFit fit_ensemble(std::span<const Grid> set, int cross_halfwidth = 1);

/// Mean of values over unmasked indices grouped by round(|k|). Bins without
/// unmasked indices are absent.
struct RadialBin {
  int k = 0;
  double mean = 0.0;
  std::size_t count = 0;
};
std::vector<RadialBin> radial_bins(const Grid& values, const Mask& mask);

}  // namespace cloud
