// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ripley/rng.hpp"

namespace ripley {

enum class FieldMethod { Auto, Dense, Circulant };

FieldMethod parse_field_method(std::string_view name);
std::string_view to_string(FieldMethod method);

/// Grids with more cells than this use circulant embedding under Auto.
inline constexpr std::size_t kDenseFieldCellLimit = 4096;

/// Stationary centered Gaussian field with covariance sigma2·exp(-|h|/scale)
/// on the centres of a square grid of cells (row-major, x fastest).
class GaussianFieldSampler {
 public:
  GaussianFieldSampler(std::size_t cells_per_axis, double cell_width, double sigma2, double scale,
                       FieldMethod method = FieldMethod::Auto);
  ~GaussianFieldSampler();
  GaussianFieldSampler(GaussianFieldSampler&&) noexcept;
  GaussianFieldSampler& operator=(GaussianFieldSampler&&) noexcept;

  std::size_t cells_per_axis() const noexcept { return m_; }
  std::size_t cell_count() const noexcept { return m_ * m_; }
  FieldMethod method() const noexcept { return method_; }

  /// One field draw; safe to call concurrently with distinct engines.
  std::vector<double> sample(Engine& gen) const;

  /// Dense grid covariance, for checks.
  Eigen::MatrixXd covariance() const;

  /// Embedding side length (circulant method only, else 0).
  std::size_t embedding_size() const noexcept { return embed_; }

 private:
  double cov(double dist) const;
  void build_dense();
  void build_circulant();

  std::size_t m_;
  double width_;
  double sigma2_;
  double scale_;
  FieldMethod method_;
  Eigen::MatrixXd factor_;            // dense: lower Cholesky factor
  std::size_t embed_ = 0;             // circulant: embedding side
  std::vector<double> sqrt_eigen_;    // circulant: sqrt(lambda / N)
  struct Plan;
  std::unique_ptr<Plan> plan_;
};

}  // namespace ripley
