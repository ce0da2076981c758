// SPDX-License-Identifier: Apache-2.0
#include "ripley/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

#include "ripley/error.hpp"
#include "ripley/spatial_grid.hpp"

namespace ripley {

RGrid::RGrid(double start, double step, std::size_t count) : start_(start), step_(step) {
  require(std::isfinite(start) && start >= 0.0, "grid must start at r >= 0");
  require(std::isfinite(step) && step > 0.0, "grid step must be positive");
  require(count >= 1, "grid needs at least one radius");
  r_.resize(count);
  for (std::size_t i = 0; i < count; ++i) r_[i] = start + static_cast<double>(i) * step;
}

RGrid RGrid::up_to(double R, double step) {
  require(std::isfinite(R) && R >= 0.0, "grid end must be >= 0");
  require(step > 0.0, "grid step must be positive");
  const auto count = static_cast<std::size_t>(std::floor(R / step + 1e-9)) + 1;
  return RGrid(0.0, step, count);
}

std::size_t RGrid::count_up_to(double R) const {
  const double slack = 1e-9 * step_;
  return static_cast<std::size_t>(
      std::upper_bound(r_.begin(), r_.end(), R + slack) - r_.begin());
}

std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::K: return "K";
    case Statistic::Pcf: return "pcf";
    case Statistic::NearestNeighbour: return "nn";
  }
  return "unknown";
}

Statistic parse_statistic(std::string_view name) {
  if (name == "K" || name == "k") return Statistic::K;
  if (name == "pcf" || name == "g") return Statistic::Pcf;
  if (name == "nn" || name == "D") return Statistic::NearestNeighbour;
  throw InvalidArgument("unknown statistic '" + std::string(name) + "'");
}

namespace {

bool in_eroded(const CubeWindow& window, std::span<const double> x, double r) {
  return window.boundary_distance(x) >= r;
}

double border_scale(const CubeWindow& window, double r) {
  const double eroded = eroded_volume(window, r);
  if (!(eroded > 0.0))
    throw InvalidArgument("window too small for radius r = " + std::to_string(r));
  return window.volume() / eroded;
}

// Weight for corrections that do not depend on r.
double pair_weight(EdgeCorrection c, const CubeWindow& w, std::span<const double> x,
                   std::span<const double> y, double d) {
  switch (c) {
    case EdgeCorrection::None:
    case EdgeCorrection::Border:
      return 1.0;
    case EdgeCorrection::Translation: {
      double overlap = 1.0;
      for (std::size_t a = 0; a < x.size(); ++a) overlap *= std::max(0.0, w.side() - std::abs(x[a] - y[a]));
      return w.volume() / overlap;
    }
    case EdgeCorrection::RigidMotion:
      return w.volume() / rotation_averaged_overlap(w, d);
    case EdgeCorrection::Isotropic:
      return 1.0 / arc_fraction_inside(w, x, d);
  }
  return 1.0;
}

void check_inputs(const PointPattern& pattern, double rho) {
  require(std::isfinite(rho) && rho > 0.0, "intensity rho must be positive");
  (void)pattern;
}

CurveEstimate make_curve(const PointPattern& pattern, double rho, const RGrid& grid, Statistic s,
                         EdgeCorrection c) {
  return {grid, std::vector<double>(grid.size(), 0.0), s, c, rho, pattern.window().volume(), 0.0};
}

}  // namespace

double edge_weight(EdgeCorrection correction, const CubeWindow& window, std::span<const double> x,
                   std::span<const double> y, double r) {
  check_supported(correction, window);
  if (correction == EdgeCorrection::Border) {
    require(r > 0.0, "border correction needs r > 0");
    const double scale = border_scale(window, r);
    return in_eroded(window, x, r) ? scale : 0.0;
  }
  return pair_weight(correction, window, x, y, distance(x, y));
}

CurveEstimate estimate_k(const PointPattern& pattern, double rho, const RGrid& grid,
                         EdgeCorrection correction) {
  check_inputs(pattern, rho);
  const CubeWindow& w = pattern.window();
  check_supported(correction, w);
  CurveEstimate out = make_curve(pattern, rho, grid, Statistic::K, correction);
  const std::size_t G = grid.size();
  const double rmax = grid.back();

  std::vector<double> border(G, 1.0);
  if (correction == EdgeCorrection::Border)
    for (std::size_t g = 0; g < G; ++g)
      if (grid[g] > 0.0) border[g] = border_scale(w, grid[g]);

  const std::size_t N = pattern.size();
  if (N < 2 || rmax <= 0.0) return out;

  const SpatialGrid index(pattern, rmax);
  const auto r = grid.values();
  std::vector<long double> rows(N * G, 0.0L);

#pragma omp parallel
  {
    // Extended precision keeps the result independent of summation order
    // to well below 1e-12, so it matches the brute-force double sum.
    std::vector<long double> hist(G);
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(N); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      std::fill(hist.begin(), hist.end(), 0.0L);
      const auto x = pattern[i];
      index.for_each_neighbor(i, rmax, [&](std::size_t j, double d) {
        const auto g = static_cast<std::size_t>(std::lower_bound(r.begin(), r.end(), d) - r.begin());
        hist[g] += pair_weight(correction, w, x, pattern[j], d);
      });
      long double acc = 0.0L;
      long double* row = rows.data() + i * G;
      const double margin = w.boundary_distance(x);
      for (std::size_t g = 0; g < G; ++g) {
        acc += hist[g];
        if (correction == EdgeCorrection::Border)
          row[g] = (grid[g] > 0.0 && margin >= grid[g]) ? acc * border[g] : 0.0L;
        else
          row[g] = acc;
      }
    }
  }

  const long double norm = 1.0L / (static_cast<long double>(w.volume()) * rho * rho);
  for (std::size_t g = 0; g < G; ++g) {
    long double total = 0.0L;
    for (std::size_t i = 0; i < N; ++i) total += rows[i * G + g];
    out.values[g] = static_cast<double>(total * norm);
  }
  return out;
}

CurveEstimate brute_force_k(const PointPattern& pattern, double rho, const RGrid& grid,
                            EdgeCorrection correction) {
  check_inputs(pattern, rho);
  const CubeWindow& w = pattern.window();
  check_supported(correction, w);
  CurveEstimate out = make_curve(pattern, rho, grid, Statistic::K, correction);
  const std::size_t G = grid.size();
  const double rmax = grid.back();
  for (std::size_t g = 0; g < G; ++g)
    if (correction == EdgeCorrection::Border && grid[g] > 0.0) border_scale(w, grid[g]);
  std::vector<long double> sums(G, 0.0L);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    for (std::size_t j = 0; j < pattern.size(); ++j) {
      if (i == j) continue;
      const double d = distance(pattern[i], pattern[j]);
      if (d > rmax) continue;
      double weight = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t g = 0; g < G; ++g) {
        if (!(d > 0.0 && d <= grid[g])) continue;
        if (correction == EdgeCorrection::Border) {
          sums[g] += edge_weight(correction, w, pattern[i], pattern[j], grid[g]);
        } else {
          if (std::isnan(weight)) weight = edge_weight(correction, w, pattern[i], pattern[j], grid[g]);
          sums[g] += weight;
        }
      }
    }
  }
  const long double norm = 1.0L / (static_cast<long double>(w.volume()) * rho * rho);
  for (std::size_t g = 0; g < G; ++g) out.values[g] = static_cast<double>(sums[g] * norm);
  return out;
}

double pcf_kernel(double t, double bandwidth) {
  if (t < -bandwidth || t >= bandwidth) return 0.0;
  const double u = t / bandwidth;
  return 0.75 / bandwidth * (1.0 - u * u);
}

CurveEstimate estimate_pcf(const PointPattern& pattern, double rho, const RGrid& grid,
                           double bandwidth) {
  check_inputs(pattern, rho);
  require(std::isfinite(bandwidth) && bandwidth > 0.0, "bandwidth must be positive");
  for (double r : grid.values())
    if (!(r - bandwidth > 0.0))
      throw InvalidArgument("pcf grid radius " + std::to_string(r) + " is not above the bandwidth");
  const CubeWindow& w = pattern.window();
  CurveEstimate out = make_curve(pattern, rho, grid, Statistic::Pcf, EdgeCorrection::Translation);
  out.bandwidth = bandwidth;
  const std::size_t G = grid.size();
  const std::size_t N = pattern.size();
  if (N < 2) return out;
  const double reach = grid.back() + bandwidth;
  const SpatialGrid index(pattern, reach);
  const auto r = grid.values();
  std::vector<double> rows(N * G, 0.0);

#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(N); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto x = pattern[i];
    double* row = rows.data() + i * G;
    index.for_each_neighbor(i, reach, [&](std::size_t j, double d) {
      const double weight = pair_weight(EdgeCorrection::Translation, w, x, pattern[j], d);
      for (auto it = std::lower_bound(r.begin(), r.end(), d - bandwidth); it != r.end(); ++it) {
        const double t = *it - d;
        if (t >= bandwidth) break;
        row[it - r.begin()] += pcf_kernel(t, bandwidth) * weight;
      }
    });
  }

  const int d = w.dimension();
  const double surface = d * unit_ball_volume(d);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t g = 0; g < G; ++g) out.values[g] += rows[i * G + g];
  for (std::size_t g = 0; g < G; ++g)
    out.values[g] /= w.volume() * surface * std::pow(grid[g], d - 1) * rho * rho;
  return out;
}

CurveEstimate estimate_nn(const PointPattern& pattern, double rho, const RGrid& grid) {
  check_inputs(pattern, rho);
  const CubeWindow& w = pattern.window();
  CurveEstimate out = make_curve(pattern, rho, grid, Statistic::NearestNeighbour, EdgeCorrection::Border);
  const std::size_t G = grid.size();
  std::vector<double> scale(G);
  for (std::size_t g = 0; g < G; ++g) scale[g] = border_scale(w, grid[g]);
  const std::size_t N = pattern.size();
  if (N < 2 || grid.back() <= 0.0) return out;

  const double rmax = grid.back();
  const SpatialGrid index(pattern, rmax);
  std::vector<double> nearest(N, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(N); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    index.for_each_neighbor(i, rmax, [&](std::size_t, double d) { nearest[i] = std::min(nearest[i], d); });
  }
  for (std::size_t g = 0; g < G; ++g) {
    const double r = grid[g];
    double count = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      if (nearest[i] <= r && in_eroded(w, pattern[i], r)) count += 1.0;
    out.values[g] = count * scale[g] / (rho * w.volume());
  }
  return out;
}

}  // namespace ripley
