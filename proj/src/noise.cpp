#include "cloud/noise.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "cloud/image_set.hpp"
#include "cloud/parallel.hpp"
#include "cloud/rng.hpp"
#include "cloud/spectral.hpp"

namespace cloud {

void validate(const NoiseSpec& spec, bool aperiodic) {
  if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta)) {
    throw InputError("noise delta must be finite and >= 0, got " + std::to_string(spec.delta));
  }
  if (spec.side < 1) throw InputError("noise side must be positive");
  if (!(spec.target_std > 0.0) || !std::isfinite(spec.target_std)) {
    throw InputError("noise target_std must be positive");
  }
  if (spec.oversample < 1) throw InputError("oversample must be >= 1");
  if (aperiodic && spec.oversample < kMinAperiodicOversample) {
    throw InputError("aperiodic noise needs oversample >= " + std::to_string(kMinAperiodicOversample) +
                     ", got " + std::to_string(spec.oversample));
  }
}

Grid white_noise(int side, std::uint64_t seed, std::uint64_t stream) {
  if (side < 1) throw InputError("noise side must be positive");
  return NormalStream(seed, stream).grid(side);
}

double filtered_pixel_variance(int side, double delta) {
  const Grid k = kmag_grid(side);
  double sum = 0.0;
  for (Eigen::Index n = 0; n < k.size(); ++n) {
    if (k(n) > 0.0) sum += std::pow(k(n), -2.0 * delta);
  }
  return sum / (static_cast<double>(side) * side);
}

Grid scale_invariant_noise_periodic(const NoiseSpec& spec, std::uint64_t stream) {
  validate(spec, false);
  const int n = spec.side;
  RealSpectralGrid spectrum = rfft2(white_noise(n, spec.seed, stream));
  const Grid k = kmag_grid(n);
  const double scale = spec.target_std / std::sqrt(filtered_pixel_variance(n, spec.delta));
  for (Eigen::Index p = 0; p < k.size(); ++p) {
    spectrum.values(p) = k(p) > 0.0 ? spectrum.values(p) * scale * std::pow(k(p), -spec.delta) : 0.0;
  }
  return irfft2(spectrum);
}

Grid cloud_noise(const NoiseSpec& spec, std::uint64_t stream) {
  validate(spec, true);
  NoiseSpec big = spec;
  big.side = spec.side * spec.oversample;
  return crop_center(scale_invariant_noise_periodic(big, stream), spec.side);
}

namespace {

template <typename Make>
std::vector<Grid> batch(std::size_t count, Make&& make) {
  std::vector<Grid> out(count);
  parallel_for(count, [&](std::size_t n) { out[n] = make(n); });
  return out;
}

}  // namespace

std::vector<Grid> white_noise_batch(int side, std::uint64_t seed, std::size_t count,
                                    std::uint64_t first_stream) {
  return batch(count, [&](std::size_t n) { return white_noise(side, seed, first_stream + n); });
}

std::vector<Grid> periodic_noise_batch(const NoiseSpec& spec, std::size_t count,
                                       std::uint64_t first_stream) {
  validate(spec, false);
  return batch(count, [&](std::size_t n) {
    return scale_invariant_noise_periodic(spec, first_stream + n);
  });
}

std::vector<Grid> cloud_noise_batch(const NoiseSpec& spec, std::size_t count,
                                    std::uint64_t first_stream) {
  validate(spec, true);
  auto samples = batch(count, [&](std::size_t n) { return cloud_noise(spec, first_stream + n); });
  if (samples.size() < 2) return samples;
  return renormalize_amplitude(std::move(samples), spec.target_std).samples;
}

double pooled_std(std::span<const Grid> samples) {
  if (samples.empty()) throw InputError("pooled_std of an empty ensemble");
  double count = 0.0;
  double sum = 0.0;
  for (const Grid& g : samples) {
    sum += g.sum();
    count += static_cast<double>(g.size());
  }
  const double mean = sum / count;
  double ss = 0.0;
  for (const Grid& g : samples) ss += (g.array() - mean).square().sum();
  return std::sqrt(ss / count);
}

Renormalized renormalize_amplitude(std::vector<Grid> samples, double target_std) {
  if (!(target_std > 0.0)) throw InputError("target_std must be positive");
  const double current = pooled_std(samples);
  if (!(current > 0.0)) throw NumericError("cannot renormalize a zero-variance ensemble");
  Renormalized out;
  out.scale = target_std / current;
  for (Grid& g : samples) g *= out.scale;
  out.samples = std::move(samples);
  return out;
}

SeamStatistics seam_statistics(std::span<const Grid> samples) {
  require_uniform(samples);
  if (samples.empty()) throw InputError("seam statistics of an empty ensemble");
  const int n = static_cast<int>(samples.front().rows());
  if (n < 3) throw InputError("seam statistics need side >= 3");
  double seam = 0.0;
  double interior = 0.0;
  for (const Grid& g : samples) {
    seam += (g.row(0) - g.row(n - 1)).cwiseAbs().sum() + (g.col(0) - g.col(n - 1)).cwiseAbs().sum();
    interior += (g.topRows(n - 1) - g.bottomRows(n - 1)).cwiseAbs().sum() +
                (g.leftCols(n - 1) - g.rightCols(n - 1)).cwiseAbs().sum();
  }
  const double count = static_cast<double>(samples.size());
  SeamStatistics s;
  s.seam = seam / (count * 2.0 * n);
  s.interior = interior / (count * 2.0 * n * (n - 1));
  return s;
}

}  // namespace cloud
