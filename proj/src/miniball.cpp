// SPDX-License-Identifier: Apache-2.0
#include "ripley/miniball.hpp"

#include <algorithm>

namespace ripley {

namespace {

bool covers(const Circle& c, const Vec2& p) {
  return dist(c.center, p) <= c.radius * (1.0 + 1e-12) + 1e-15;
}

Circle from_two(const Vec2& a, const Vec2& b) {
  return {{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])}, 0.5 * dist(a, b)};
}

Circle from_three(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double bx = b[0] - a[0], by = b[1] - a[1];
  const double cx = c[0] - a[0], cy = c[1] - a[1];
  const double det = 2.0 * (bx * cy - by * cx);
  const double scale = std::max({std::abs(bx), std::abs(by), std::abs(cx), std::abs(cy), 1e-300});
  if (std::abs(det) <= 1e-14 * scale * scale) {
    // Collinear: the widest pair spans the others.
    Circle best = from_two(a, b);
    for (const Circle& cand : {from_two(a, c), from_two(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / det;
  const double uy = (bx * c2 - cx * b2) / det;
  return {{a[0] + ux, a[1] + uy}, std::hypot(ux, uy)};
}

}  // namespace

Circle min_enclosing_circle(std::span<const Vec2> points) {
  if (points.empty()) return {};
  Circle c{points[0], 0.0};
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (covers(c, points[i])) continue;
    c = {points[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (covers(c, points[j])) continue;
      c = from_two(points[i], points[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (covers(c, points[k])) continue;
        c = from_three(points[i], points[j], points[k]);
      }
    }
  }
  return c;
}

}  // namespace ripley
