// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ripley/geometry.hpp"

namespace ripley {

/// Uniformly spaced radii r_i = start + i·step.
class RGrid {
 public:
  RGrid(double start, double step, std::size_t count);

  /// {0, step, 2·step, ...} up to and including R.
  static RGrid up_to(double R, double step = 0.1);

  std::span<const double> values() const noexcept { return r_; }
  double operator[](std::size_t i) const { return r_[i]; }
  std::size_t size() const noexcept { return r_.size(); }
  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  double back() const { return r_.back(); }

  /// Number of leading grid points with r <= R (up to rounding slack).
  std::size_t count_up_to(double R) const;

  friend bool operator==(const RGrid& a, const RGrid& b) {
    return a.start_ == b.start_ && a.step_ == b.step_ && a.r_.size() == b.r_.size();
  }

 private:
  double start_;
  double step_;
  std::vector<double> r_;
};

enum class Statistic { K, Pcf, NearestNeighbour };

std::string_view to_string(Statistic s);
Statistic parse_statistic(std::string_view name);

struct CurveEstimate {
  RGrid grid;
  std::vector<double> values;
  Statistic statistic = Statistic::K;
  EdgeCorrection correction = EdgeCorrection::None;
  double rho = 1.0;
  double volume = 1.0;
  double bandwidth = 0.0;
};

/// Pair weight e_n(x, y) for K at radius r (r only matters for Border).
double edge_weight(EdgeCorrection correction, const CubeWindow& window, std::span<const double> x,
                   std::span<const double> y, double r);

/// Edge-corrected K over ordered pairs, using a bucket grid and OpenMP over
/// points. Per-point partial sums are reduced in point order, so results do
/// not depend on the thread count.
CurveEstimate estimate_k(const PointPattern& pattern, double rho, const RGrid& grid,
                         EdgeCorrection correction);

/// Serial O(N^2) double sum; the reference the fast path is tested against.
CurveEstimate brute_force_k(const PointPattern& pattern, double rho, const RGrid& grid,
                            EdgeCorrection correction);

inline constexpr double kDefaultBandwidth = 0.2;

/// k(t) = 3/(4δ)·(1 - (t/δ)^2) on [-δ, δ), zero elsewhere.
double pcf_kernel(double t, double bandwidth);

/// Kernel pair-correlation estimate with translation weights, normalized by
/// d·κ_d·r^(d-1)·n·ρ^2.
CurveEstimate estimate_pcf(const PointPattern& pattern, double rho, const RGrid& grid,
                           double bandwidth = kDefaultBandwidth);

/// Border-corrected nearest-neighbour distribution function D(r).
CurveEstimate estimate_nn(const PointPattern& pattern, double rho, const RGrid& grid);

}  // namespace ripley
