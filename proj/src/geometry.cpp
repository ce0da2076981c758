// SPDX-License-Identifier: Apache-2.0
#include "ripley/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ripley/error.hpp"

namespace ripley {

namespace {

double side_from_volume(int d, double n) {
  switch (d) {
    case 1: return n;
    case 2: return std::sqrt(n);
    case 3: return std::cbrt(n);
    default: return std::pow(n, 1.0 / d);
  }
}

}  // namespace

CubeWindow::CubeWindow(int dimension, double volume)
    : dimension_(dimension), volume_(volume), side_(0.0) {
  require(dimension >= 1, "window dimension must be >= 1");
  require(std::isfinite(volume) && volume > 0.0, "window volume must be positive and finite");
  side_ = side_from_volume(dimension, volume);
}

CubeWindow CubeWindow::with_side(int dimension, double side) {
  require(std::isfinite(side) && side > 0.0, "window side must be positive and finite");
  CubeWindow w(dimension, std::pow(side, dimension));
  w.side_ = side;
  return w;
}

bool CubeWindow::contains(std::span<const double> p) const {
  if (p.size() != static_cast<std::size_t>(dimension_)) return false;
  const double h = half_side();
  return std::all_of(p.begin(), p.end(), [h](double c) { return c >= -h && c <= h; });
}

double CubeWindow::boundary_distance(std::span<const double> p) const {
  const double h = half_side();
  double m = std::numeric_limits<double>::infinity();
  for (double c : p) m = std::min(m, h - std::abs(c));
  return m;
}

PointPattern::PointPattern(CubeWindow window) : window_(window) {}

PointPattern::PointPattern(CubeWindow window, std::vector<double> coordinates)
    : window_(window), coords_(std::move(coordinates)) {
  const auto d = static_cast<std::size_t>(window_.dimension());
  require(coords_.size() % d == 0, "coordinate count is not a multiple of the dimension");
  const std::size_t count = size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto p = (*this)[i];
    for (double c : p) require(std::isfinite(c), "point coordinate is not finite");
    require(window_.contains(p), "point lies outside the observation window");
  }
  // Sort by first coordinate and sweep: any pair closer than tol has first
  // coordinates within tol of each other.
  const double tol = 1e-12 * window_.side();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return coords_[a * d] < coords_[b * d]; });
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      if (coords_[order[b] * d] - coords_[order[a] * d] > tol) break;
      require(distance((*this)[order[a]], (*this)[order[b]]) > tol,
              "pattern is not simple: duplicate points");
    }
  }
}

double PointPattern::min_pair_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) best = std::min(best, distance((*this)[i], (*this)[j]));
  return best;
}

std::string_view to_string(EdgeCorrection correction) {
  switch (correction) {
    case EdgeCorrection::None: return "none";
    case EdgeCorrection::Translation: return "translation";
    case EdgeCorrection::RigidMotion: return "rigid";
    case EdgeCorrection::Border: return "border";
    case EdgeCorrection::Isotropic: return "isotropic";
  }
  return "unknown";
}

EdgeCorrection parse_edge_correction(std::string_view name) {
  if (name == "none") return EdgeCorrection::None;
  if (name == "translation" || name == "translate") return EdgeCorrection::Translation;
  if (name == "rigid" || name == "rigid-motion") return EdgeCorrection::RigidMotion;
  if (name == "border") return EdgeCorrection::Border;
  if (name == "isotropic" || name == "ripley") return EdgeCorrection::Isotropic;
  throw InvalidArgument("unknown edge correction '" + std::string(name) + "'");
}

void check_supported(EdgeCorrection correction, const CubeWindow& window) {
  if ((correction == EdgeCorrection::RigidMotion || correction == EdgeCorrection::Isotropic) &&
      window.dimension() != 2)
    throw InvalidArgument(std::string(to_string(correction)) +
                          " correction is only implemented for d = 2");
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

double overlap_volume(const CubeWindow& window, std::span<const double> shift) {
  require(shift.size() == static_cast<std::size_t>(window.dimension()),
          "shift dimension does not match window");
  double v = 1.0;
  for (double c : shift) v *= std::max(0.0, window.side() - std::abs(c));
  return v;
}

double eroded_volume(const CubeWindow& window, double s) {
  require(s >= 0.0, "erosion radius must be nonnegative");
  return std::pow(std::max(0.0, window.side() - 2.0 * s), window.dimension());
}

double arc_fraction_inside(const CubeWindow& window, std::span<const double> center,
                           double radius) {
  require(window.dimension() == 2, "arc_fraction_inside requires d = 2");
  require(center.size() == 2, "center must be a 2-vector");
  require(window.contains(center), "circle center lies outside the window");
  require(std::isfinite(radius) && radius > 0.0, "radius must be positive");

  const double h = window.half_side();
  const double two_pi = 2.0 * std::numbers::pi;
  if (window.boundary_distance(center) >= radius) return 1.0;

  // Angles where the circle crosses one of the four edge lines; the circle
  // is split into arcs that are either wholly inside or wholly outside.
  std::vector<double> cuts;
  auto add_line_crossings = [&](double offset, bool vertical) {
    // offset: signed distance from center to the line along its normal axis.
    if (std::abs(offset) >= radius) return;
    const double a = std::acos(offset / radius);
    if (vertical) {
      cuts.push_back(a);
      cuts.push_back(two_pi - a);
    } else {
      const double b = std::asin(offset / radius);
      cuts.push_back(b < 0 ? b + two_pi : b);
      cuts.push_back(std::numbers::pi - b);
    }
  };
  add_line_crossings(h - center[0], true);
  add_line_crossings(-h - center[0], true);
  add_line_crossings(h - center[1], false);
  add_line_crossings(-h - center[1], false);
  if (cuts.empty()) return 1.0;

  for (double& c : cuts) c = std::fmod(std::fmod(c, two_pi) + two_pi, two_pi);
  std::sort(cuts.begin(), cuts.end());
  double inside = 0.0;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double start = cuts[i];
    const double end = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts.front() + two_pi;
    const double span = end - start;
    if (span <= 0.0) continue;
    const double mid = start + 0.5 * span;
    const double x = center[0] + radius * std::cos(mid);
    const double y = center[1] + radius * std::sin(mid);
    if (std::abs(x) <= h && std::abs(y) <= h) inside += span;
  }
  const double fraction = inside / two_pi;
  if (!(fraction > 0.0)) throw InvalidArgument("circle does not meet the window");
  return std::min(fraction, 1.0);
}

double rotation_averaged_overlap(const CubeWindow& window, double t, int nodes) {
  require(window.dimension() == 2, "rotation_averaged_overlap requires d = 2");
  require(t >= 0.0, "shift length must be nonnegative");
  require(t < window.side(), "shift length must be smaller than the window side");
  require(nodes >= 4 && nodes % 4 == 0, "node count must be a positive multiple of four");
  // The integrand is smooth on each quarter turn and kinked at the axes, so
  // integrate one quarter with the trapezoidal rule plus the first
  // Euler-Maclaurin end correction; f'(pi/2) - f'(0) = 2t(L - t).
  const double L = window.side();
  const int m = nodes / 4;
  const double h = 0.5 * std::numbers::pi / m;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double theta = k * h;
    const double f = (L - t * std::cos(theta)) * (L - t * std::sin(theta));
    sum += (k == 0 || k == m) ? 0.5 * f : f;
  }
  const double integral = h * sum - h * h / 12.0 * 2.0 * t * (L - t);
  return integral / (0.5 * std::numbers::pi);
}

double unit_ball_volume(int dimension) {
  require(dimension >= 1, "dimension must be >= 1");
  const double half = 0.5 * dimension;
  return std::pow(std::numbers::pi, half) / std::tgamma(1.0 + half);
}

}  // namespace ripley
