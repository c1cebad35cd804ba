#pragma once

// Reference computations used only by tests. None of these go through the
// FFT or the spectrum packing code they are compared against.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "cloud/grid.hpp"

namespace cloud::oracle {

/// O(N^4) centered forward DFT: Z[i,j] = sum x[m,n] exp(-2 pi i (ky m + kx n) / N).
inline SpectralGrid direct_dft(const Grid& x) {
  const int n = static_cast<int>(x.rows());
  const int c = n / 2;
  SpectralGrid z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::complex<double> acc = 0.0;
      for (int m = 0; m < n; ++m) {
        for (int q = 0; q < n; ++q) {
          const double phase = -2.0 * std::numbers::pi * ((i - c) * m + (j - c) * q) / n;
          acc += x(m, q) * std::polar(1.0, phase);
        }
      }
      z(i, j) = acc;
    }
  }
  return z;
}

/// O(N^4) centered inverse DFT with 1/N^2 normalization.
inline SpectralGrid direct_idft(const SpectralGrid& z) {
  const int n = static_cast<int>(z.rows());
  const int c = n / 2;
  SpectralGrid x(n, n);
  for (int m = 0; m < n; ++m) {
    for (int q = 0; q < n; ++q) {
      std::complex<double> acc = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double phase = 2.0 * std::numbers::pi * ((i - c) * m + (j - c) * q) / n;
          acc += z(i, j) * std::polar(1.0, phase);
        }
      }
      x(m, q) = acc / static_cast<double>(n * n);
    }
  }
  return x;
}

/// Index of the negated frequency computed by searching all indices.
inline Index2 negated_by_search(Index2 p, int n) {
  const int c = n / 2;
  const int ky = p.row - c;
  const int kx = p.col - c;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int qy = i - c;
      const int qx = j - c;
      if (((qy + ky) % n + n) % n == 0 && ((qx + kx) % n + n) % n == 0) return {i, j};
    }
  }
  return {-1, -1};
}

inline Grid uniform_grid(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Grid g(n, n);
  for (Eigen::Index p = 0; p < g.size(); ++p) g(p) = u(rng);
  return g;
}

inline double max_rel(const auto& a, const auto& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
}

}  // namespace cloud::oracle
