#include "doctest.h"

#include <cmath>

#include "cloud/noise.hpp"
#include "cloud/stats.hpp"

using namespace cloud;

namespace {

NoiseSpec spec_of(double delta, int side, std::uint64_t seed) {
  NoiseSpec s;
  s.delta = delta;
  s.side = side;
  s.seed = seed;
  return s;
}

// Pooled lag-1 correlation along rows and along columns.
std::pair<double, double> lag1(std::span<const Grid> set) {
  double h = 0.0, v = 0.0, ss = 0.0, nh = 0.0, nv = 0.0, n = 0.0;
  for (const Grid& g : set) {
    const Eigen::Index s = g.rows();
    h += (g.leftCols(s - 1).array() * g.rightCols(s - 1).array()).sum();
    v += (g.topRows(s - 1).array() * g.bottomRows(s - 1).array()).sum();
    nh += static_cast<double>((s - 1) * s);
    nv += static_cast<double>((s - 1) * s);
    ss += g.squaredNorm();
    n += static_cast<double>(g.size());
  }
  const double var = ss / n;
  return {h / nh / var, v / nv / var};
}

}  // namespace

TEST_CASE("white noise determinism") {
  CHECK(white_noise(16, 5) == white_noise(16, 5));
  CHECK(white_noise(16, 5, 1) != white_noise(16, 5, 2));
  CHECK(white_noise(16, 5) != white_noise(16, 6));
}

TEST_CASE("white noise moments and independence") {
  const auto set = white_noise_batch(100, 13, 100);  // 10^6 values
  double sum = 0.0;
  for (const auto& g : set) sum += g.sum();
  const double mean = sum / 1e6;
  CHECK(std::abs(mean) < 0.004);
  CHECK(std::abs(pooled_std(set) - 1.0) < 0.003);
  const auto [h, v] = lag1(set);
  CHECK(std::abs(h) < 0.005);
  CHECK(std::abs(v) < 0.005);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(scale_invariant_noise_periodic(spec_of(-0.5, 16, 0)), InputError);
  NoiseSpec s = spec_of(1.0, 16, 0);
  s.oversample = 2;
  CHECK_THROWS_AS(cloud_noise(s), InputError);
  CHECK_NOTHROW(scale_invariant_noise_periodic(s));
  s.target_std = 0.0;
  CHECK_THROWS_AS(scale_invariant_noise_periodic(s), InputError);
}

TEST_CASE("periodic noise with delta 0 is white") {
  const auto set = periodic_noise_batch(spec_of(0.0, 64, 3), 64);
  const auto [h, v] = lag1(set);
  CHECK(std::abs(h) < 0.01);
  CHECK(std::abs(v) < 0.01);
  for (const auto& g : set) CHECK(std::abs(g.mean()) < 1e-12);
}

TEST_CASE("periodic noise recovers delta and is seamless") {
  const auto set = periodic_noise_batch(spec_of(1.5, 64, 4), 256);
  CHECK(fit_ensemble(set).delta == doctest::Approx(1.5).epsilon(0.05 / 1.5));
  const SeamStatistics seam = seam_statistics(set);
  CHECK(std::abs(seam.ratio() - 1.0) < 0.1);
  CHECK(std::abs(pooled_std(set) - 1.0) < 0.1);
}

TEST_CASE("cloud noise recovers delta, unit std and breaks the seam") {
  const auto set = cloud_noise_batch(spec_of(1.5, 96, 5), 256);
  const PowerLawFit fit = fit_ensemble(set);
  CHECK(std::abs(fit.delta - 1.5) < 0.05);
  CHECK(std::abs(pooled_std(set) - 1.0) < 0.02);
  CHECK(seam_statistics(set).ratio() > 2.0);
}

TEST_CASE("analytic cloud scale is unbiased") {
  // Without ensemble renormalization the pooled std is 1 in expectation.
  NoiseSpec s = spec_of(1.0, 32, 21);
  std::vector<Grid> set;
  for (std::uint64_t n = 0; n < 1024; ++n) set.push_back(cloud_noise(s, n));
  CHECK(std::abs(pooled_std(set) - 1.0) < 0.03);
}

TEST_CASE("cloud noise with delta 0 fits flat") {
  const auto set = cloud_noise_batch(spec_of(0.0, 32, 6), 512);
  CHECK(std::abs(fit_ensemble(set).delta) < 0.05);
}

TEST_CASE("cloud noise is deterministic per spec and stream") {
  const NoiseSpec s = spec_of(1.5, 24, 7);
  CHECK(cloud_noise(s, 3) == cloud_noise(s, 3));
  CHECK(cloud_noise(s, 3) != cloud_noise(s, 4));
  CHECK(cloud_noise_batch(s, 4, 3) == cloud_noise_batch(s, 4, 3));
  const auto batch = cloud_noise_batch(s, 4, 3);
  const Grid single = cloud_noise(s, 3);
  const double ratio = batch[0](0, 0) / single(0, 0);
  CHECK(batch[0].isApprox(single * ratio, 1e-12));
  CHECK(cloud_noise_batch(s, 1, 3)[0] == single);
}

TEST_CASE("sum of independent cloud samples keeps delta") {
  const auto x = cloud_noise_batch(spec_of(1.5, 64, 8), 256);
  const auto y = cloud_noise_batch(spec_of(1.5, 64, 9), 256);
  std::vector<Grid> sum;
  for (std::size_t n = 0; n < x.size(); ++n) sum.push_back((x[n] + y[n]) / std::sqrt(2.0));
  CHECK(std::abs(fit_ensemble(sum).delta - 1.5) < 0.05);
}

TEST_CASE("sub-blocks of cloud noise keep delta") {
  const auto set = cloud_noise_batch(spec_of(1.5, 64, 10), 256);
  std::vector<Grid> corners;
  for (const auto& g : set) corners.push_back(g.topLeftCorner(32, 32));
  CHECK(std::abs(fit_ensemble(corners).delta - 1.5) < 0.1);
}

TEST_CASE("larger delta gives a steeper fitted slope") {
  double previous = 1.0;
  for (double delta : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double slope = fit_ensemble(cloud_noise_batch(spec_of(delta, 32, 11), 128)).slope;
    CHECK(slope < previous);
    previous = slope;
  }
}

TEST_CASE("renormalize_amplitude") {
  std::vector<Grid> set = white_noise_batch(16, 12, 20);
  for (auto& g : set) g *= 2.0 / pooled_std(set);
  const double before = pooled_std(set);
  const Renormalized r = renormalize_amplitude(set, 1.0);
  CHECK(r.scale == doctest::Approx(1.0 / before).epsilon(1e-12));
  CHECK(std::abs(pooled_std(r.samples) - 1.0) < 1e-9);
  const Renormalized again = renormalize_amplitude(r.samples, 1.0);
  CHECK(std::abs(again.scale - 1.0) < 1e-12);
  CHECK(r.samples[3](1, 2) / r.samples[3](5, 9) == doctest::Approx(set[3](1, 2) / set[3](5, 9)).epsilon(1e-12));
  CHECK_THROWS_AS(renormalize_amplitude({Grid::Zero(4, 4), Grid::Zero(4, 4)}, 1.0), NumericError);
}

TEST_CASE("renormalize maps pooled std 2 to scale 0.5") {
  std::vector<Grid> set{Grid::Constant(2, 2, 2.0), Grid::Constant(2, 2, -2.0)};
  CHECK(pooled_std(set) == 2.0);
  CHECK(renormalize_amplitude(set, 1.0).scale == 0.5);
}
