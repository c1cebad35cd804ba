#include "cloud/distance.hpp"

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cloud/parallel.hpp"
#include "cloud/rng.hpp"

namespace cloud {

ReferenceMetric make_reference_metric(int side, double delta) {
  if (side < 1) throw InputError("metric side must be positive");
  if (!std::isfinite(delta)) throw InputError("metric delta must be finite");
  ReferenceMetric m;
  m.delta = delta;
  m.side = side;
  m.weights = kmag_grid(side);
  for (Eigen::Index p = 0; p < m.weights.size(); ++p) {
    const double k = m.weights(p);
    m.weights(p) = k > 0.0 ? std::pow(k, 2.0 * delta) : 0.0;
  }
  return m;
}

namespace {

void require_side(const RealSpectralGrid& x, const ReferenceMetric& metric) {
  if (x.values.rows() != metric.side || x.values.cols() != metric.side) {
    throw InputError("spectrum side " + std::to_string(x.values.rows()) + " does not match metric side " +
                     std::to_string(metric.side));
  }
}

void require_samples(std::size_t n, const char* what) {
  if (n < 2) throw InputError(std::string(what) + " needs at least 2 samples, got " + std::to_string(n));
}

DistanceEstimate summarize(const std::vector<double>& d, std::string pairing) {
  DistanceEstimate e;
  e.n_pairs = d.size();
  e.pairing = std::move(pairing);
  double sum = 0.0;
  for (double v : d) sum += v;
  e.mean = sum / static_cast<double>(d.size());
  double ss = 0.0;
  for (double v : d) ss += (v - e.mean) * (v - e.mean);
  const double n = static_cast<double>(d.size());
  e.std_error = d.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return e;
}

}  // namespace

double maha_point(const RealSpectralGrid& x, const RealSpectralGrid& y, const ReferenceMetric& metric) {
  require_side(x, metric);
  require_side(y, metric);
  return std::sqrt((metric.weights.array() * (x.values - y.values).array().square()).sum());
}

double maha_to_center(const RealSpectralGrid& x, const ReferenceMetric& metric) {
  require_side(x, metric);
  return std::sqrt((metric.weights.array() * x.values.array().square()).sum());
}

DistanceEstimate maha_distribution_to_center(std::span<const RealSpectralGrid> samples,
                                             const ReferenceMetric& metric) {
  require_samples(samples.size(), "distance to center");
  std::vector<double> d(samples.size());
  parallel_for(samples.size(), [&](std::size_t n) { d[n] = maha_to_center(samples[n], metric); });
  return summarize(d, "center");
}

DistanceEstimate maha_between_distributions(std::span<const RealSpectralGrid> a,
                                            std::span<const RealSpectralGrid> b,
                                            const ReferenceMetric& metric, std::size_t n_pairs,
                                            std::uint64_t seed) {
  require_samples(a.size(), "distribution distance");
  require_samples(b.size(), "distribution distance");
  if (n_pairs == 0) throw InputError("distribution distance needs at least one pair");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::string pairing;
  if (n_pairs >= a.size() * b.size()) {
    pairing = "all";
    for (std::size_t u = 0; u < a.size(); ++u) {
      for (std::size_t v = 0; v < b.size(); ++v) pairs.emplace_back(u, v);
    }
  } else {
    pairing = "random";
    std::mt19937_64 engine(derive_seed(seed, 0));
    for (std::size_t n = 0; n < n_pairs; ++n) {
      // Modulo bias is below 2^-40 for any realistic ensemble size.
      const std::size_t u = static_cast<std::size_t>(engine() % a.size());
      const std::size_t v = static_cast<std::size_t>(engine() % b.size());
      pairs.emplace_back(u, v);
    }
  }
  std::vector<double> d(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t n) {
    d[n] = maha_point(a[pairs[n].first], b[pairs[n].second], metric);
  });
  return summarize(d, pairing);
}

std::vector<RealSpectralGrid> to_real_spectra(std::span<const Grid> grids) {
  std::vector<RealSpectralGrid> out(grids.size());
  parallel_for(grids.size(), [&](std::size_t n) { out[n] = rfft2(grids[n]); });
  return out;
}

}  // namespace cloud
