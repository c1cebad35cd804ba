#pragma once

// File formats: 8-bit PNG (via libpng) and the lossless "CLD1" raw grid:
//   bytes 0-3  magic "CLD1"
//   bytes 4-7  side N, u32 little-endian
//   then N*N float32 little-endian values in row-major order.

#include <cstdint>
#include <filesystem>

#include "cloud/grid.hpp"

namespace cloud {

/// Luma in [0, 1]. Gray PNGs are read directly; color PNGs are converted
/// with Rec. 601 weights (0.299, 0.587, 0.114). Alpha is ignored.
Grid read_png_luma(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG of round(255 * (v - lo) / (hi - lo)),
/// clamped to [0, 255]. A zero range writes mid-gray.
void write_png_gray(const std::filesystem::path& path, const Grid& values, double lo, double hi);

inline constexpr char kRawMagic[4] = {'C', 'L', 'D', '1'};

void write_raw_grid(const std::filesystem::path& path, const Grid& values);
Grid read_raw_grid(const std::filesystem::path& path);

}  // namespace cloud
