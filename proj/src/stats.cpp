#include "cloud/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "cloud/parallel.hpp"
#include "cloud/spectral.hpp"

namespace cloud {

namespace {

constexpr std::size_t kChunk = 64;

// Mean of item(n) over n in [0, count), reduced chunk by chunk in index order.
template <typename Scalar, typename Item>
GridT<Scalar> ordered_mean(std::size_t count, int rows, int cols, Item&& item) {
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<GridT<Scalar>> partial(chunks, GridT<Scalar>::Zero(rows, cols));
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(count, (c + 1) * kChunk);
    for (std::size_t n = c * kChunk; n < end; ++n) partial[c] += item(n);
  });
  GridT<Scalar> total = GridT<Scalar>::Zero(rows, cols);
  for (const auto& p : partial) total += p;
  return total / static_cast<double>(count);
}

template <typename Scalar, typename Item>
GridT<Scalar> ordered_mean(std::size_t count, int side, Item&& item) {
  return ordered_mean<Scalar>(count, side, side, std::forward<Item>(item));
}

int require_ensemble(std::span<const Grid> set) {
  if (set.size() < 2) {
    throw InputError("statistics need at least 2 grids, got " + std::to_string(set.size()));
  }
  require_uniform(set);
  return static_cast<int>(set.front().rows());
}

}  // namespace

Moments pixelwise_moments(std::span<const Grid> set) {
  const int side = require_ensemble(set);
  Moments m;
  m.mean = ordered_mean<double>(set.size(), side, [&](std::size_t n) -> const Grid& { return set[n]; });
  const Grid var = ordered_mean<double>(set.size(), side, [&](std::size_t n) -> Grid {
    return (set[n] - m.mean).array().square().matrix();
  });
  m.std = var.cwiseSqrt();
  return m;
}

CovarianceSlice covariance_slice(std::span<const Grid> set, Index2 anchor) {
  const int side = require_ensemble(set);
  require_index(anchor, side);
  const Grid mean = pixelwise_moments(set).mean;
  const double anchor_mean = mean(anchor.row, anchor.col);
  CovarianceSlice slice{anchor, ordered_mean<double>(set.size(), side, [&](std::size_t n) -> Grid {
                          return (set[n] - mean) * (set[n](anchor.row, anchor.col) - anchor_mean);
                        })};
  return slice;
}

Mask central_cross_mask(int side, int halfwidth) {
  if (side < 1) throw InputError("grid side must be positive");
  const int c = center_index(side);
  Mask mask(side, side);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      const int ky = i - c;
      const int kx = j - c;
      mask(i, j) = (ky == 0 && kx == 0) || std::abs(ky) <= halfwidth || std::abs(kx) <= halfwidth;
    }
  }
  return mask;
}

SpectralCovarianceDiag spectral_covariance_diag(std::span<const Grid> set, int cross_halfwidth) {
  const int side = require_ensemble(set);
  const Grid mean = pixelwise_moments(set).mean;
  SpectralCovarianceDiag diag;
  diag.values = ordered_mean<double>(set.size(), side, [&](std::size_t n) -> Grid {
    return fft2_centered<double>(set[n] - mean).cwiseAbs2();
  });
  diag.mask = central_cross_mask(side, cross_halfwidth);
  diag.mean_spectrum = fft2_centered(mean);
  diag.cross_halfwidth = cross_halfwidth;
  diag.count = set.size();
  return diag;
}

SpectralCovarianceProbe spectral_covariance_offdiag_probe(std::span<const Grid> set, Index2 anchor) {
  const int side = require_ensemble(set);
  require_index(anchor, side);
  if (frequency(anchor, side).kmag == 0.0) {
    throw InputError("probe anchor is the zero-frequency mode, which is always masked");
  }
  const Grid mean = pixelwise_moments(set).mean;
  // Both products accumulate in one pass: gamma on the left, c on the right.
  const SpectralGrid both = ordered_mean<std::complex<double>>(
      set.size(), side, 2 * side, [&](std::size_t n) -> SpectralGrid {
        const SpectralGrid w = fft2_centered<double>(set[n] - mean);
        const std::complex<double> a = w(anchor.row, anchor.col);
        SpectralGrid out(side, 2 * side);
        out.leftCols(side) = w * std::conj(a);
        out.rightCols(side) = w * a;
        return out;
      });
  return {anchor, both.leftCols(side), both.rightCols(side)};
}

Grid periodogram(const Grid& x) {
  require_square(x);
  const Grid centered = (x.array() - x.mean()).matrix();
  return fft2_centered(centered).cwiseAbs2();
}

std::vector<ProfilePoint> radial_profile(const Grid& diag, const Mask& mask) {
  const int side = require_square(diag);
  if (mask.rows() != side || mask.cols() != side) throw InputError("mask shape does not match diagonal");
  std::vector<ProfilePoint> profile;
  profile.reserve(static_cast<std::size_t>(side) * side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const FreqIndex f = frequency({i, j}, side);
      if (f.kmag == 0.0) continue;
      const double v = diag(i, j);
      ProfilePoint p{f.index, std::log(f.kmag), 0.0, mask(i, j)};
      if (v > 0.0 && std::isfinite(v)) {
        p.log_gamma = std::log(v);
      } else if (p.masked) {
        p.log_gamma = std::numeric_limits<double>::quiet_NaN();
      } else {
        throw NumericError("non-positive covariance " + std::to_string(v) + " at unmasked index (" +
                           std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      profile.push_back(p);
    }
  }
  return profile;
}

std::vector<ProfilePoint> radial_profile(const SpectralCovarianceDiag& diag) {
  return radial_profile(diag.values, diag.mask);
}

PowerLawFit fit_power_law(std::span<const ProfilePoint> profile) {
  std::size_t n = 0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  std::set<double> distinct;
  for (const auto& p : profile) {
    if (p.masked) continue;
    ++n;
    mean_x += p.log_k;
    mean_y += p.log_gamma;
    distinct.insert(p.log_k);
  }
  if (n < kMinFitPoints) {
    throw FitError("power-law fit needs at least " + std::to_string(kMinFitPoints) +
                   " unmasked points, got " + std::to_string(n));
  }
  if (distinct.size() < 2) throw FitError("power-law fit needs at least 2 distinct |k| values");
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : profile) {
    if (p.masked) continue;
    const double dx = p.log_k - mean_x;
    const double dy = p.log_gamma - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.delta = -fit.slope / 2.0;
  fit.amplitude = std::exp(fit.intercept / 2.0);
  double ss_res = 0.0;
  for (const auto& p : profile) {
    if (p.masked) continue;
    const double r = p.log_gamma - (fit.intercept + fit.slope * p.log_k);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.n_points = n;
  return fit;
}

PowerLawFit fit_ensemble(std::span<const Grid> set, int cross_halfwidth) {
  const auto profile = radial_profile(spectral_covariance_diag(set, cross_halfwidth));
  return fit_power_law(profile);
}

std::vector<RadialBin> radial_bins(const Grid& values, const Mask& mask) {
  const int side = require_square(values);
  std::vector<RadialBin> bins;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      if (mask(i, j)) continue;
      const int k = static_cast<int>(std::lround(frequency({i, j}, side).kmag));
      if (static_cast<std::size_t>(k) >= bins.size()) bins.resize(k + 1);
      bins[k].k = k;
      bins[k].mean += values(i, j);
      ++bins[k].count;
    }
  }
  std::vector<RadialBin> out;
  for (auto& b : bins) {
    if (b.count == 0) continue;
    b.mean /= static_cast<double>(b.count);
    out.push_back(b);
  }
  return out;
}

}  // namespace cloud
