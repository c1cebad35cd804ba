#pragma once

// Square grids, centered frequency coordinates and the frequency-negation
// involution that pairs each Fourier mode with its complex conjugate.

#include <Eigen/Dense>

#include <cmath>
#include <compare>
#include <complex>
#include <string>
#include <vector>

#include "cloud/error.hpp"

namespace cloud {

template <typename Scalar>
using GridT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using SpectralGridT = GridT<std::complex<Real>>;

/// Real N x N image or noise field. Row index is the vertical axis.
using Grid = GridT<double>;

/// Complex spectrum with the zero-frequency mode moved to index (N/2, N/2).
using SpectralGrid = SpectralGridT<double>;

/// true marks an excluded entry.
using Mask = GridT<bool>;

struct Index2 {
  int row = 0;
  int col = 0;

  auto operator<=>(const Index2&) const = default;
};

/// Signed integer frequency of a centered-spectrum index, in cycles per image.
struct FreqIndex {
  Index2 index;
  int ky = 0;
  int kx = 0;
  double kmag = 0.0;
};

/// Position of the zero-frequency mode along either axis. Equal to N/2 for
/// even N and (N-1)/2 for odd N.
constexpr int center_index(int side) { return side / 2; }

inline void require_index(Index2 p, int side) {
  if (side < 1) throw InputError("grid side must be positive, got " + std::to_string(side));
  if (p.row < 0 || p.row >= side || p.col < 0 || p.col >= side) {
    throw InputError("index (" + std::to_string(p.row) + ", " + std::to_string(p.col) +
                     ") out of range for side " + std::to_string(side));
  }
}

inline FreqIndex frequency(Index2 p, int side) {
  require_index(p, side);
  const int c = center_index(side);
  FreqIndex f;
  f.index = p;
  f.ky = p.row - c;
  f.kx = p.col - c;
  f.kmag = std::hypot(static_cast<double>(f.kx), static_cast<double>(f.ky));
  return f;
}

namespace detail {

// Odd N: reflection about the center. Even N: 0 is its own partner (the
// Nyquist row/column), everything else reflects about N/2.
constexpr int involute_axis(int i, int side) {
  if (side % 2 == 1) return side - 1 - i;
  return i == 0 ? 0 : side - i;
}

}  // namespace detail

/// Index of the mode with negated frequency. For a real grid x with centered
/// spectrum Z, Z[involute(p)] == conj(Z[p]).
inline Index2 involute(Index2 p, int side) {
  require_index(p, side);
  return {detail::involute_axis(p.row, side), detail::involute_axis(p.col, side)};
}

/// Fixed points of the involution: the modes whose spectrum value is real
/// for any real grid.
inline std::vector<Index2> stationary_set(int side) {
  if (side < 1) throw InputError("grid side must be positive");
  const int c = center_index(side);
  if (side % 2 == 1) return {{c, c}};
  return {{0, 0}, {0, c}, {c, 0}, {c, c}};
}

enum class Sector { canonical, mirrored, stationary };

/// Canonical modes are those that precede their partner in row-major order.
inline Sector sector_of(Index2 p, int side) {
  const Index2 q = involute(p, side);
  if (q == p) return Sector::stationary;
  return p < q ? Sector::canonical : Sector::mirrored;
}

struct SectorPartition {
  std::vector<Index2> canonical;
  std::vector<Index2> mirrored;  // mirrored[n] == involute(canonical[n])
  std::vector<Index2> stationary;
};

inline SectorPartition canonical_partition(int side) {
  if (side < 1) throw InputError("grid side must be positive");
  SectorPartition parts;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const Index2 p{i, j};
      switch (sector_of(p, side)) {
        case Sector::canonical:
          parts.canonical.push_back(p);
          parts.mirrored.push_back(involute(p, side));
          break;
        case Sector::stationary:
          parts.stationary.push_back(p);
          break;
        case Sector::mirrored:
          break;
      }
    }
  }
  return parts;
}

/// |k| for every centered-spectrum index.
template <typename Real = double>
GridT<Real> kmag_grid(int side) {
  if (side < 1) throw InputError("grid side must be positive");
  const int c = center_index(side);
  GridT<Real> k(side, side);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      k(i, j) = static_cast<Real>(std::hypot(static_cast<double>(i - c), static_cast<double>(j - c)));
    }
  }
  return k;
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& g) {
  return g.derived().array().isFinite().all();
}

template <typename Derived>
int require_square(const Eigen::DenseBase<Derived>& g) {
  if (g.rows() != g.cols() || g.rows() < 1) {
    throw InputError("expected a non-empty square grid, got " + std::to_string(g.rows()) + "x" +
                     std::to_string(g.cols()));
  }
  return static_cast<int>(g.rows());
}

/// Central side x side block of a larger square grid.
template <typename Scalar>
GridT<Scalar> crop_center(const GridT<Scalar>& g, int side) {
  const int big = require_square(g);
  if (side < 1 || side > big) throw InputError("crop side out of range");
  const int offset = (big - side) / 2;
  return g.block(offset, offset, side, side);
}

}  // namespace cloud
