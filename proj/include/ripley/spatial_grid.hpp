// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ripley/geometry.hpp"

namespace ripley {

/// Uniform bucket grid over a pattern's window for fixed-radius neighbour
/// queries. Buckets are stored CSR-style (offsets + point indices).
class SpatialGrid {
 public:
  SpatialGrid(const PointPattern& pattern, double min_cell_width);

  std::size_t cells_per_axis() const noexcept { return per_axis_; }
  double cell_width() const noexcept { return width_; }

  /// Calls fn(j, dist) for every point j != i with dist(i, j) <= radius.
  template <class Fn>
  void for_each_neighbor(std::size_t i, double radius, Fn&& fn) const;

 private:
  std::size_t cell_of(std::span<const double> p, std::size_t axis) const {
    const double u = (p[axis] + pattern_->window().half_side()) / width_;
    const auto c = static_cast<long long>(std::floor(u));
    if (c < 0) return 0;
    if (static_cast<std::size_t>(c) >= per_axis_) return per_axis_ - 1;
    return static_cast<std::size_t>(c);
  }

  const PointPattern* pattern_;
  std::size_t per_axis_ = 1;
  double width_ = 0.0;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> items_;
};

template <class Fn>
void SpatialGrid::for_each_neighbor(std::size_t i, double radius, Fn&& fn) const {
  const PointPattern& pat = *pattern_;
  const int d = pat.dimension();
  const auto x = pat[i];
  const auto reach = static_cast<long long>(std::ceil(radius / width_));
  const auto m = static_cast<long long>(per_axis_);

  long long lo[8], hi[8], idx[8];
  for (int a = 0; a < d; ++a) {
    const auto c = static_cast<long long>(cell_of(x, static_cast<std::size_t>(a)));
    lo[a] = std::max(0LL, c - reach);
    hi[a] = std::min(m - 1, c + reach);
    idx[a] = lo[a];
  }
  while (true) {
    std::size_t flat = 0;
    for (int a = d - 1; a >= 0; --a) flat = flat * per_axis_ + static_cast<std::size_t>(idx[a]);
    for (std::size_t k = offsets_[flat]; k < offsets_[flat + 1]; ++k) {
      const std::size_t j = items_[k];
      if (j == i) continue;
      const double dist = distance(x, pat[j]);
      if (dist <= radius) fn(j, dist);
    }
    int a = 0;
    while (a < d && ++idx[a] > hi[a]) {
      idx[a] = lo[a];
      ++a;
    }
    if (a == d) break;
  }
}

}  // namespace ripley
