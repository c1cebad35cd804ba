#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "cloud/image_set.hpp"

namespace cloud {

/// Every *.png in the directory, sorted by file name, converted to luma in [0, 1].
/// Throws InputError if the directory has no PNGs or their sizes differ.
ImageSet load_png_dir(const std::filesystem::path& dir);

/// Sorted *.png paths of a directory.
std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir);

inline constexpr int kStl10Side = 96;
inline constexpr std::size_t kStl10RecordBytes = 3 * kStl10Side * kStl10Side;

/// One STL10 record: three 96x96 channel planes (R, G, B), each stored
/// column-major. Returns row-major luma in [0, 1].
Grid decode_stl10_record(std::span<const std::uint8_t, kStl10RecordBytes> record);

ImageSet load_stl10(const std::filesystem::path& file, std::optional<std::size_t> limit = std::nullopt);

enum class BarCause { top, bottom, left, right };

const char* to_string(BarCause cause);

struct LetterboxOptions {
  int band = 4;
  double uniformity_tol = 0.01;
};

/// Returns the first edge (top, bottom, left, right) whose band rows (or
/// columns) each have std below uniformity_tol and whose band mean is within
/// 0.05 of 0 or 1.
std::optional<BarCause> detect_letterbox(const Grid& image, const LetterboxOptions& options = {});

struct Rejection {
  std::size_t index = 0;
  BarCause cause = BarCause::top;
};

struct CleaningReport {
  std::size_t total = 0;
  std::size_t kept = 0;
  std::size_t rejected = 0;
  std::vector<Rejection> reasons;
};

struct CleanResult {
  ImageSet set;
  CleaningReport report;
  std::vector<std::size_t> kept_indices;
};

CleanResult clean_letterbox(const ImageSet& set, const LetterboxOptions& options = {});

struct NormalizedSet {
  ImageSet set;
  Grid mean_map;
  Grid std_map;
};

inline constexpr double kMinPixelStd = 1e-6;

/// Pixel-wise standardization (x - mean) / std with population std. Throws
/// DegeneratePixelError for a pixel whose std is at most 1e-6.
NormalizedSet normalize(const ImageSet& set);

}  // namespace cloud
