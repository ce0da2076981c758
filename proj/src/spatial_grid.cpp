// SPDX-License-Identifier: Apache-2.0
#include "ripley/spatial_grid.hpp"

#include <algorithm>

#include "ripley/error.hpp"

namespace ripley {

SpatialGrid::SpatialGrid(const PointPattern& pattern, double min_cell_width)
    : pattern_(&pattern) {
  const int d = pattern.dimension();
  require(d <= 8, "spatial grid supports d <= 8");
  require(min_cell_width > 0.0, "cell width must be positive");
  const double L = pattern.window().side();
  // Cells at least min_cell_width wide, and not vastly more cells than points.
  auto per_axis = static_cast<std::size_t>(std::max(1.0, std::floor(L / min_cell_width)));
  const double budget = 4.0 * static_cast<double>(std::max<std::size_t>(pattern.size(), 1)) + 16.0;
  while (per_axis > 1 && std::pow(static_cast<double>(per_axis), d) > budget) per_axis /= 2;
  per_axis_ = per_axis;
  width_ = L / static_cast<double>(per_axis_);

  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= per_axis_;
  std::vector<std::size_t> flat(pattern.size());
  offsets_.assign(total + 1, 0);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    std::size_t f = 0;
    for (int a = d - 1; a >= 0; --a) f = f * per_axis_ + cell_of(pattern[i], static_cast<std::size_t>(a));
    flat[i] = f;
    ++offsets_[f + 1];
  }
  for (std::size_t c = 0; c < total; ++c) offsets_[c + 1] += offsets_[c];
  items_.resize(pattern.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < pattern.size(); ++i) items_[cursor[flat[i]]++] = i;
}

}  // namespace ripley
