#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cloud/grid.hpp"

namespace cloud {

/// An ordered collection of same-sized square grids.
struct ImageSet {
  std::vector<Grid> images;
  std::string source;
  bool normalized = false;

  std::size_t size() const { return images.size(); }
  bool empty() const { return images.empty(); }
  int side() const { return images.empty() ? 0 : static_cast<int>(images.front().rows()); }
  std::span<const Grid> view() const { return images; }
};

/// Throws InputError when the grids are not all square with a common side,
/// or contain non-finite values.
inline void require_uniform(std::span<const Grid> grids) {
  if (grids.empty()) return;
  const int side = require_square(grids.front());
  for (std::size_t n = 0; n < grids.size(); ++n) {
    if (grids[n].rows() != side || grids[n].cols() != side) {
      throw InputError("grid " + std::to_string(n) + " is " + std::to_string(grids[n].rows()) +
                       "x" + std::to_string(grids[n].cols()) + ", expected " +
                       std::to_string(side) + "x" + std::to_string(side));
    }
    if (!all_finite(grids[n])) throw InputError("grid " + std::to_string(n) + " has non-finite values");
  }
}

inline ImageSet make_image_set(std::vector<Grid> images, std::string source) {
  require_uniform(images);
  return ImageSet{std::move(images), std::move(source), false};
}

}  // namespace cloud
