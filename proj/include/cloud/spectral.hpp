#pragma once

// Centered 2D DFT and the real-valued repacking of a real grid's spectrum.
//
// Conventions: the forward transform is unnormalized, the inverse carries
// 1/N^2, and the zero-frequency mode sits at (N/2, N/2).

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>

#include "cloud/grid.hpp"

namespace cloud {

namespace detail {

// In-place 2D transform (columns then rows) on an unshifted array.
template <std::floating_point Real>
void fft2_inplace(SpectralGridT<Real>& a, bool inverse) {
  using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
  thread_local Eigen::FFT<Real> fft;
  const Eigen::Index n = a.rows();
  if (n == 1) return;  // identity; kissfft does not handle length 1
  CVec in(n);
  CVec out(n);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    in = a.col(j);
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    a.col(j) = out;
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    in = a.row(i).transpose();
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    a.row(i) = out.transpose();
  }
}

// Moves index 0 to the center (shift = +c) or back (shift = -c).
template <typename Scalar>
GridT<Scalar> roll2(const GridT<Scalar>& a, int shift) {
  const int n = static_cast<int>(a.rows());
  GridT<Scalar> out(n, n);
  for (int j = 0; j < n; ++j) {
    const int jj = ((j + shift) % n + n) % n;
    for (int i = 0; i < n; ++i) {
      out(((i + shift) % n + n) % n, jj) = a(i, j);
    }
  }
  return out;
}

}  // namespace detail

template <std::floating_point Real>
SpectralGridT<Real> fft2_centered(const GridT<Real>& x) {
  const int n = require_square(x);
  SpectralGridT<Real> z = x.template cast<std::complex<Real>>();
  detail::fft2_inplace(z, false);
  return detail::roll2(z, center_index(n));
}

template <std::floating_point Real>
struct InverseTransformT {
  GridT<Real> values;
  // max |imag| over max |value| of the complex inverse. Nonzero residue means
  // the input spectrum was not conjugate-symmetric.
  Real imag_residue = 0;

  static constexpr Real kSymmetryTolerance = Real(1e-6);
  bool symmetry_violated() const { return imag_residue > kSymmetryTolerance; }
};

using InverseTransform = InverseTransformT<double>;

/// Inverse of fft2_centered. The imaginary part of the result is dropped and
/// its relative size reported in imag_residue.
template <std::floating_point Real>
InverseTransformT<Real> ifft2_centered(const SpectralGridT<Real>& z) {
  const int n = require_square(z);
  SpectralGridT<Real> a = detail::roll2(z, -center_index(n));
  detail::fft2_inplace(a, true);
  InverseTransformT<Real> result;
  result.values = a.real();
  const Real scale = a.cwiseAbs().maxCoeff();
  result.imag_residue = scale > Real(0) ? a.imag().cwiseAbs().maxCoeff() / scale : Real(0);
  return result;
}

/// How the real and imaginary parts of paired modes are scaled when packed.
/// sqrt2 makes the packing an isometry up to the FFT's factor N, so per-mode
/// variances match the complex spectrum's E|Z|^2.
enum class SectorScaling { sqrt2, unit };

template <std::floating_point Real>
struct RealSpectralGridT {
  GridT<Real> values;
  SectorScaling scaling = SectorScaling::sqrt2;

  int side() const { return static_cast<int>(values.rows()); }
};

using RealSpectralGrid = RealSpectralGridT<double>;

namespace detail {

template <std::floating_point Real>
Real sector_factor(SectorScaling s) {
  return s == SectorScaling::sqrt2 ? std::numbers::sqrt2_v<Real> : Real(1);
}

}  // namespace detail

/// Packs a centered spectrum of a real grid into a real grid of the same
/// shape: canonical modes keep the real part, their mirrored partners hold
/// the imaginary part, stationary modes keep their (real) value.
template <std::floating_point Real>
RealSpectralGridT<Real> pack_real_spectrum(const SpectralGridT<Real>& z,
                                           SectorScaling scaling = SectorScaling::sqrt2) {
  const int n = require_square(z);
  const Real s = detail::sector_factor<Real>(scaling);
  RealSpectralGridT<Real> out{GridT<Real>(n, n), scaling};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Index2 p{i, j};
      const Index2 q = involute(p, n);
      if (q == p) {
        out.values(i, j) = z(i, j).real();
      } else if (p < q) {
        out.values(i, j) = s * z(i, j).real();
        out.values(q.row, q.col) = s * z(i, j).imag();
      }
    }
  }
  return out;
}

/// Inverse of pack_real_spectrum; the result is conjugate-symmetric.
template <std::floating_point Real>
SpectralGridT<Real> unpack_real_spectrum(const RealSpectralGridT<Real>& x) {
  const int n = require_square(x.values);
  const Real s = detail::sector_factor<Real>(x.scaling);
  SpectralGridT<Real> z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Index2 p{i, j};
      const Index2 q = involute(p, n);
      if (q == p) {
        z(i, j) = x.values(i, j);
      } else if (p < q) {
        const std::complex<Real> v(x.values(i, j) / s, x.values(q.row, q.col) / s);
        z(i, j) = v;
        z(q.row, q.col) = std::conj(v);
      }
    }
  }
  return z;
}

/// Real Fourier transform: linear over the reals, invertible, real-valued.
template <std::floating_point Real>
RealSpectralGridT<Real> rfft2(const GridT<Real>& x, SectorScaling scaling = SectorScaling::sqrt2) {
  return pack_real_spectrum(fft2_centered(x), scaling);
}

template <std::floating_point Real>
GridT<Real> irfft2(const RealSpectralGridT<Real>& x) {
  return ifft2_centered(unpack_real_spectrum(x)).values;
}

}  // namespace cloud
