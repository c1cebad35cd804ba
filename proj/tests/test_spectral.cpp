#include "doctest.h"

#include <random>

#include "cloud/noise.hpp"
#include "cloud/spectral.hpp"
#include "oracles.hpp"

using namespace cloud;

TEST_CASE("fft2_centered of a constant is a single center value") {
  const Grid x = Grid::Constant(4, 4, 0.75);
  SpectralGrid z = fft2_centered(x);
  CHECK(std::abs(z(2, 2) - std::complex<double>(16 * 0.75)) < 1e-12);
  z(2, 2) = 0.0;
  CHECK(z.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fft2_centered of an impulse is flat") {
  Grid x = Grid::Zero(4, 4);
  x(0, 0) = 1.0;
  const SpectralGrid z = fft2_centered(x);
  CHECK((z.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("fft2_centered matches the direct DFT") {
  std::mt19937_64 rng(3);
  for (int n : {3, 4, 5, 8}) {
    const Grid x = oracle::uniform_grid(n, rng);
    CHECK(oracle::max_rel(fft2_centered(x), oracle::direct_dft(x)) < 1e-10);
  }
}

TEST_CASE("ifft2_centered inverts and matches the direct inverse") {
  std::mt19937_64 rng(5);
  const Grid x = oracle::uniform_grid(16, rng);
  const auto back = ifft2_centered(fft2_centered(x));
  CHECK(oracle::max_rel(back.values, x) < 1e-9);
  CHECK_FALSE(back.symmetry_violated());

  SpectralGrid z = SpectralGrid::Zero(4, 4);
  z(2, 2) = 16.0;
  const auto ones = ifft2_centered(z);
  CHECK((ones.values.array() - 1.0).abs().maxCoeff() < 1e-12);

  const SpectralGrid w = fft2_centered(oracle::uniform_grid(6, rng));
  CHECK(oracle::max_rel(SpectralGrid(ifft2_centered(w).values.cast<std::complex<double>>()),
                        oracle::direct_idft(w)) < 1e-10);
}

TEST_CASE("ifft2_centered reports symmetry residue") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int n : {4, 5}) {
    SpectralGrid z(n, n);
    for (Eigen::Index p = 0; p < z.size(); ++p) z(p) = {g(rng), g(rng)};
    // Symmetrize by averaging with conj of the involuted copy.
    SpectralGrid sym(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Index2 q = involute({i, j}, n);
        sym(i, j) = 0.5 * (z(i, j) + std::conj(z(q.row, q.col)));
      }
    }
    CHECK(ifft2_centered(sym).imag_residue < 1e-12);
    const auto asym = ifft2_centered(z);
    CHECK(asym.symmetry_violated());
  }
}

TEST_CASE("rfft2 and irfft2 are mutual inverses") {
  std::mt19937_64 rng(21);
  for (int n : {1, 2, 3, 4, 5, 8, 9, 16, 96}) {
    const Grid x = oracle::uniform_grid(n, rng);
    const RealSpectralGrid big_x = rfft2(x);
    CHECK(oracle::max_rel(irfft2(big_x), x) < 1e-9);
    RealSpectralGrid y{oracle::uniform_grid(n, rng)};
    CHECK(oracle::max_rel(rfft2(irfft2(y)).values, y.values) < 1e-9);
    RealSpectralGrid u{x, SectorScaling::unit};
    CHECK(oracle::max_rel(rfft2(irfft2(u), SectorScaling::unit).values, u.values) < 1e-9);
  }
}

TEST_CASE("rfft2 is linear over the reals and zero maps to zero") {
  std::mt19937_64 rng(22);
  CHECK(rfft2(Grid(Grid::Zero(8, 8))).values.cwiseAbs().maxCoeff() == 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 20);
    const Grid x = oracle::uniform_grid(n, rng);
    const Grid y = oracle::uniform_grid(n, rng);
    const double a = 3.0 * (static_cast<double>(rng() % 1000) / 1000.0) - 1.5;
    const Grid lhs = rfft2(Grid(a * x + y)).values;
    const Grid rhs = a * rfft2(x).values + rfft2(y).values;
    CHECK(oracle::max_rel(lhs, rhs) < 1e-9);
  }
}

TEST_CASE("rfft2 preserves Parseval under the sqrt2 packing") {
  std::mt19937_64 rng(23);
  for (int n : {2, 3, 4, 5, 8, 9, 16, 96}) {
    const Grid x = oracle::uniform_grid(n, rng);
    const double lhs = rfft2(x).values.squaredNorm();
    const double rhs = static_cast<double>(n) * n * x.squaredNorm();
    CHECK(std::abs(lhs - rhs) <= 1e-6 * rhs);
  }
}

TEST_CASE("rfft2 of white noise has flat per-index variance N^2") {
  constexpr int n = 16;
  constexpr int samples = 10000;
  Grid sum_sq = Grid::Zero(n, n);
  for (int s = 0; s < samples; ++s) sum_sq += rfft2(white_noise(n, 77, s)).values.cwiseAbs2();
  const Grid var = sum_sq / samples;
  CHECK(var.maxCoeff() < 1.05 * n * n);
  CHECK(var.minCoeff() > 0.95 * n * n);
}

TEST_CASE("irfft2 of a stationary basis vector matches the direct inverse DFT") {
  for (int n : {4, 5, 6}) {
    for (const Index2 s : stationary_set(n)) {
      RealSpectralGrid basis{Grid::Zero(n, n)};
      basis.values(s.row, s.col) = 1.0;
      SpectralGrid z = SpectralGrid::Zero(n, n);
      z(s.row, s.col) = 1.0;
      const SpectralGrid expected = oracle::direct_idft(z);
      CHECK(expected.imag().cwiseAbs().maxCoeff() < 1e-12);
      const Grid got = irfft2(basis);
      CHECK((got - expected.real()).cwiseAbs().maxCoeff() < 1e-12);
      // Each is constant up to sign: |value| = 1/N^2 everywhere.
      CHECK((got.cwiseAbs().array() - 1.0 / (n * n)).abs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("rfft2 output is finite and real for extreme inputs") {
  Grid x = Grid::Constant(8, 8, 1e150);
  x(3, 4) = -1e150;
  CHECK(all_finite(rfft2(x).values));
}
