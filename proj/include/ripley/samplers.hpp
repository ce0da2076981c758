// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "ripley/gaussian_field.hpp"
#include "ripley/geometry.hpp"
#include "ripley/rng.hpp"

namespace ripley {

/// Homogeneous Poisson process: Poisson(rho·n) points, i.i.d. uniform.
PointPattern sample_poisson(const CubeWindow& window, double rho, RngSeed seed);

/// Log-Gaussian Cox process driven by a field with covariance
/// sigma2·exp(-|h|/scale) and mean mu, discretised on cells of width
/// 1/grid_resolution (rounded so the cells tile the window exactly).
struct LgcpParams {
  double sigma2 = 0.0;
  double scale = 1.0;
  double mu = 0.0;
  double grid_resolution = 1.0;
  FieldMethod method = FieldMethod::Auto;

  /// mu = -sigma2/2, so that exp(mu + sigma2/2) = 1.
  static LgcpParams unit_intensity(double sigma2, double scale);

  double intensity() const;
  void validate() const;
};

/// Planar LGCP sampler; the field factorization is computed once at
/// construction and shared by every draw.
class LgcpSampler {
 public:
  LgcpSampler(const CubeWindow& window, const LgcpParams& params);

  PointPattern sample(RngSeed seed) const;

  const GaussianFieldSampler& field() const noexcept { return field_; }
  double cell_width() const noexcept { return cell_width_; }

 private:
  CubeWindow window_;
  LgcpParams params_;
  double cell_width_;
  GaussianFieldSampler field_;
};

PointPattern sample_lgcp(const CubeWindow& window, const LgcpParams& params, RngSeed seed);

/// Matérn cluster process: Poisson(kappa) parents on the window dilated by
/// the cluster radius, each with Poisson(mean_offspring) offspring uniform in
/// the ball of that radius.
struct MaternClusterParams {
  double parent_intensity = 1.0;
  double mean_offspring = 1.0;
  double cluster_radius = 0.5;

  double intensity() const { return parent_intensity * mean_offspring; }
  void validate() const;
};

PointPattern sample_matern_cluster(const CubeWindow& window, const MaternClusterParams& params,
                                   RngSeed seed);

}  // namespace ripley
