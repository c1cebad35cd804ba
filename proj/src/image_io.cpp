#include "cloud/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

namespace cloud {

namespace {

struct PngImageGuard {
  png_image image{};
  PngImageGuard() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImageGuard() { png_image_free(&image); }
};

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

}  // namespace

Grid read_png_luma(const std::filesystem::path& path) {
  PngImageGuard g;
  if (!png_image_begin_read_from_file(&g.image, path.c_str())) {
    throw IoError("cannot decode PNG " + path.string() + ": " + g.image.message);
  }
  const bool color = (g.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  g.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int width = static_cast<int>(g.image.width);
  const int height = static_cast<int>(g.image.height);
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(g.image));
  if (!png_image_finish_read(&g.image, nullptr, buffer.data(), 0, nullptr)) {
    throw IoError("cannot decode PNG " + path.string() + ": " + g.image.message);
  }
  if (width != height) {
    throw FormatError("PNG " + path.string() + " is " + std::to_string(width) + "x" +
                      std::to_string(height) + ", expected a square image");
  }
  Grid out(height, width);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      if (color) {
        const png_byte* px = &buffer[3 * (static_cast<std::size_t>(i) * width + j)];
        out(i, j) = (0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]) / 255.0;
      } else {
        out(i, j) = buffer[static_cast<std::size_t>(i) * width + j] / 255.0;
      }
    }
  }
  return out;
}

void write_png_gray(const std::filesystem::path& path, const Grid& values, double lo, double hi) {
  const int height = static_cast<int>(values.rows());
  const int width = static_cast<int>(values.cols());
  std::vector<png_byte> buffer(static_cast<std::size_t>(width) * height);
  const double range = hi - lo;
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      double v = range > 0.0 ? 255.0 * (values(i, j) - lo) / range : 127.5;
      if (!std::isfinite(v)) v = 0.0;
      buffer[static_cast<std::size_t>(i) * width + j] =
          static_cast<png_byte>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  PngImageGuard g;
  g.image.width = static_cast<png_uint_32>(width);
  g.image.height = static_cast<png_uint_32>(height);
  g.image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&g.image, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + g.image.message);
  }
}

void write_raw_grid(const std::filesystem::path& path, const Grid& values) {
  const int side = require_square(values);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kRawMagic, 4);
  const std::uint32_t n = to_little(static_cast<std::uint32_t>(side));
  out.write(reinterpret_cast<const char*>(&n), 4);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const auto bits = to_little(std::bit_cast<std::uint32_t>(static_cast<float>(values(i, j))));
      out.write(reinterpret_cast<const char*>(&bits), 4);
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Grid read_raw_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  std::uint32_t n = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  if (!in || std::memcmp(magic, kRawMagic, 4) != 0) {
    throw FormatError(path.string() + " is not a CLD1 raw grid");
  }
  const int side = static_cast<int>(to_little(n));
  if (side < 1 || side > 65536) throw FormatError(path.string() + ": invalid side");
  Grid out(side, side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      std::uint32_t bits = 0;
      in.read(reinterpret_cast<char*>(&bits), 4);
      if (!in) {
        throw FormatError(path.string() + ": truncated at byte " +
                          std::to_string(8 + 4 * (static_cast<std::size_t>(i) * side + j)));
      }
      out(i, j) = static_cast<double>(std::bit_cast<float>(to_little(bits)));
    }
  }
  return out;
}

}  // namespace cloud
