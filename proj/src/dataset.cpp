#include "cloud/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "cloud/image_io.hpp"
#include "cloud/parallel.hpp"
#include "cloud/stats.hpp"

namespace cloud {

std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

ImageSet load_png_dir(const std::filesystem::path& dir) {
  const auto files = list_pngs(dir);
  if (files.empty()) throw InputError("no PNG files in " + dir.string());
  std::vector<Grid> images(files.size());
  parallel_for(files.size(), [&](std::size_t n) { images[n] = read_png_luma(files[n]); });

  const Eigen::Index side = images.front().rows();
  std::string offenders;
  for (std::size_t n = 0; n < images.size(); ++n) {
    if (images[n].rows() != side) {
      offenders += (offenders.empty() ? "" : ", ") + files[n].filename().string() + " (" +
                   std::to_string(images[n].rows()) + ")";
    }
  }
  if (!offenders.empty()) {
    throw InputError("PNG sizes differ from " + files.front().filename().string() + " (" +
                     std::to_string(side) + "): " + offenders);
  }
  return make_image_set(std::move(images), dir.string());
}

Grid decode_stl10_record(std::span<const std::uint8_t, kStl10RecordBytes> record) {
  constexpr std::size_t plane = kStl10Side * kStl10Side;
  Grid out(kStl10Side, kStl10Side);
  for (int col = 0; col < kStl10Side; ++col) {
    for (int row = 0; row < kStl10Side; ++row) {
      const std::size_t at = static_cast<std::size_t>(col) * kStl10Side + row;
      out(row, col) =
          (0.299 * record[at] + 0.587 * record[plane + at] + 0.114 * record[2 * plane + at]) / 255.0;
    }
  }
  return out;
}

ImageSet load_stl10(const std::filesystem::path& file, std::optional<std::size_t> limit) {
  std::ifstream in(file, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open " + file.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % kStl10RecordBytes != 0) {
    const std::size_t at = bytes - bytes % kStl10RecordBytes;
    throw FormatError(file.string() + ": truncated STL10 record at byte offset " + std::to_string(at) +
                      " (file is " + std::to_string(bytes) + " bytes)");
  }
  std::size_t count = bytes / kStl10RecordBytes;
  if (count == 0) throw FormatError(file.string() + " contains no STL10 records");
  if (limit) count = std::min(count, *limit);
  in.seekg(0);
  std::vector<std::uint8_t> buffer(count * kStl10RecordBytes);
  in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()));
  if (!in) throw IoError("failed reading " + file.string());
  std::vector<Grid> images(count);
  parallel_for(count, [&](std::size_t n) {
    images[n] = decode_stl10_record(
        std::span<const std::uint8_t, kStl10RecordBytes>(buffer.data() + n * kStl10RecordBytes,
                                                          kStl10RecordBytes));
  });
  return make_image_set(std::move(images), file.string());
}

const char* to_string(BarCause cause) {
  switch (cause) {
    case BarCause::top:
      return "top-bar";
    case BarCause::bottom:
      return "bottom-bar";
    case BarCause::left:
      return "left-bar";
    case BarCause::right:
      return "right-bar";
  }
  return "top-bar";
}

namespace {

constexpr double kExtremeMargin = 0.05;

template <typename Lines>
bool is_bar(const Lines& band, double tol) {
  // band: each row of `band` is one line of the edge band.
  for (Eigen::Index r = 0; r < band.rows(); ++r) {
    const auto line = band.row(r).array();
    const double m = line.mean();
    const double sd = std::sqrt((line - m).square().mean());
    if (!(sd < tol)) return false;
  }
  const double mean = band.mean();
  return mean <= kExtremeMargin || mean >= 1.0 - kExtremeMargin;
}

}  // namespace

std::optional<BarCause> detect_letterbox(const Grid& image, const LetterboxOptions& options) {
  const int n = require_square(image);
  if (options.band < 1 || 2 * options.band >= n) {
    throw InputError("letterbox band must satisfy 1 <= band < N/2");
  }
  const int b = options.band;
  const double tol = options.uniformity_tol;
  if (is_bar(image.topRows(b), tol)) return BarCause::top;
  if (is_bar(image.bottomRows(b), tol)) return BarCause::bottom;
  if (is_bar(image.leftCols(b).transpose(), tol)) return BarCause::left;
  if (is_bar(image.rightCols(b).transpose(), tol)) return BarCause::right;
  return std::nullopt;
}

CleanResult clean_letterbox(const ImageSet& set, const LetterboxOptions& options) {
  CleanResult result;
  result.set.source = set.source;
  result.set.normalized = set.normalized;
  result.report.total = set.size();
  for (std::size_t n = 0; n < set.size(); ++n) {
    if (const auto cause = detect_letterbox(set.images[n], options)) {
      result.report.reasons.push_back({n, *cause});
    } else {
      result.set.images.push_back(set.images[n]);
      result.kept_indices.push_back(n);
    }
  }
  result.report.kept = result.kept_indices.size();
  result.report.rejected = result.report.reasons.size();
  return result;
}

NormalizedSet normalize(const ImageSet& set) {
  Moments m = pixelwise_moments(set.view());
  for (int j = 0; j < m.std.cols(); ++j) {
    for (int i = 0; i < m.std.rows(); ++i) {
      if (!(m.std(i, j) > kMinPixelStd)) throw DegeneratePixelError(i, j);
    }
  }
  NormalizedSet out;
  out.set.source = set.source;
  out.set.normalized = true;
  out.set.images.reserve(set.size());
  for (const Grid& x : set.images) {
    out.set.images.push_back(((x - m.mean).array() / m.std.array()).matrix());
  }
  out.mean_map = std::move(m.mean);
  out.std_map = std::move(m.std);
  return out;
}

}  // namespace cloud
