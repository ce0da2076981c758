// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <span>

namespace ripley {

using Vec2 = std::array<double, 2>;

inline double dist(const Vec2& a, const Vec2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

struct Circle {
  Vec2 center{0.0, 0.0};
  double radius = 0.0;
};

/// Smallest circle enclosing all points (Welzl's incremental form with
/// move-to-front boundary sets). Empty input gives a zero circle at origin.
Circle min_enclosing_circle(std::span<const Vec2> points);

}  // namespace ripley
