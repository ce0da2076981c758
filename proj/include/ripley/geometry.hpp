// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ripley {

/// The cube [-L/2, L/2]^d of volume n = L^d, centered at the origin.
class CubeWindow {
 public:
  CubeWindow(int dimension, double volume);

  static CubeWindow with_side(int dimension, double side);

  int dimension() const noexcept { return dimension_; }
  double volume() const noexcept { return volume_; }
  double side() const noexcept { return side_; }
  double half_side() const noexcept { return 0.5 * side_; }

  /// Closed containment.
  bool contains(std::span<const double> p) const;

  /// Sup-norm distance from an interior point to the boundary.
  double boundary_distance(std::span<const double> p) const;

  friend bool operator==(const CubeWindow&, const CubeWindow&) = default;

 private:
  int dimension_;
  double volume_;
  double side_;
};

/// A finite simple point set inside a CubeWindow. Coordinates are stored
/// contiguously, point-major.
class PointPattern {
 public:
  explicit PointPattern(CubeWindow window);

  /// Validates that every point lies in the closed window and that no two
  /// points are closer than 1e-12 times the side length.
  PointPattern(CubeWindow window, std::vector<double> coordinates);

  const CubeWindow& window() const noexcept { return window_; }
  int dimension() const noexcept { return window_.dimension(); }
  std::size_t size() const noexcept { return coords_.size() / static_cast<std::size_t>(dimension()); }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    const auto d = static_cast<std::size_t>(dimension());
    return {coords_.data() + i * d, d};
  }
  std::span<const double> coordinates() const noexcept { return coords_; }

  /// Minimum pairwise distance, +inf for fewer than two points.
  double min_pair_distance() const;

 private:
  CubeWindow window_;
  std::vector<double> coords_;
};

enum class EdgeCorrection { None, Translation, RigidMotion, Border, Isotropic };

std::string_view to_string(EdgeCorrection correction);
EdgeCorrection parse_edge_correction(std::string_view name);

/// Throws unless `correction` is defined for the window's dimension
/// (rigid-motion and isotropic corrections are planar only).
void check_supported(EdgeCorrection correction, const CubeWindow& window);

double distance(std::span<const double> a, std::span<const double> b);

/// |W ∩ (W + v)| = prod_i max(0, L - |v_i|).
double overlap_volume(const CubeWindow& window, std::span<const double> shift);

/// |W ⊖ B_s(0)| = max(0, L - 2s)^d.
double eroded_volume(const CubeWindow& window, double s);

/// Fraction of the circle of `radius` about `center` that lies inside the
/// planar window, from the exact circle/edge intersection angles.
double arc_fraction_inside(const CubeWindow& window, std::span<const double> center,
                           double radius);

inline constexpr int kDefaultRotationNodes = 720;

/// Average of |W ∩ (W + t·u)| over unit vectors u in the plane, by the
/// end-corrected trapezoidal rule on `nodes` equally spaced angles
/// (a multiple of four).
double rotation_averaged_overlap(const CubeWindow& window, double t,
                                 int nodes = kDefaultRotationNodes);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int dimension);

}  // namespace ripley
