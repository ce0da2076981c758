// SPDX-License-Identifier: Apache-2.0
#include "ripley/samplers.hpp"

#include <cmath>
#include <random>

#include "ripley/error.hpp"

namespace ripley {

namespace {

std::size_t lgcp_cells_per_axis(const CubeWindow& window, double resolution) {
  return static_cast<std::size_t>(std::max(1.0, std::round(window.side() * resolution)));
}

}  // namespace

PointPattern sample_poisson(const CubeWindow& window, double rho, RngSeed seed) {
  require(std::isfinite(rho) && rho > 0.0, "Poisson intensity must be positive");
  Engine gen = make_engine(seed);
  std::poisson_distribution<long long> count_dist(rho * window.volume());
  const long long count = count_dist(gen);
  const int d = window.dimension();
  const double L = window.side();
  const double h = window.half_side();
  std::vector<double> coords(static_cast<std::size_t>(count) * static_cast<std::size_t>(d));
  for (double& c : coords) c = -h + L * uniform01(gen);
  return PointPattern(window, std::move(coords));
}

LgcpParams LgcpParams::unit_intensity(double sigma2, double scale) {
  LgcpParams p;
  p.sigma2 = sigma2;
  p.scale = scale;
  p.mu = -0.5 * sigma2;
  return p;
}

double LgcpParams::intensity() const { return std::exp(mu + 0.5 * sigma2); }

void LgcpParams::validate() const {
  require(std::isfinite(sigma2) && sigma2 >= 0.0, "LGCP variance must be nonnegative");
  require(std::isfinite(scale) && scale > 0.0, "LGCP scale must be positive");
  require(std::isfinite(mu), "LGCP mean must be finite");
  require(std::isfinite(grid_resolution) && grid_resolution >= 1.0,
          "LGCP grid resolution must be >= 1 cell per unit length");
  const double rho = intensity();
  require(std::isfinite(rho) && rho > 0.0, "LGCP intensity must be finite and positive");
}

LgcpSampler::LgcpSampler(const CubeWindow& window, const LgcpParams& params)
    : window_(window),
      params_((params.validate(), params)),
      cell_width_(window.side() / static_cast<double>(lgcp_cells_per_axis(window, params.grid_resolution))),
      field_(lgcp_cells_per_axis(window, params.grid_resolution), cell_width_, params.sigma2,
             params.scale, params.method) {
  require(window.dimension() == 2, "LGCP sampler requires d = 2");
}

PointPattern LgcpSampler::sample(RngSeed seed) const {
  Engine gen = make_engine(seed);
  const std::vector<double> z = field_.sample(gen);
  const std::size_t m = field_.cells_per_axis();
  const double h = window_.half_side();
  const double area = cell_width_ * cell_width_;
  std::vector<double> coords;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const double rate = std::exp(params_.mu + z[j * m + i]) * area;
      std::poisson_distribution<long long> count_dist(rate);
      const long long k = rate > 0.0 ? count_dist(gen) : 0;
      const double x0 = -h + static_cast<double>(i) * cell_width_;
      const double y0 = -h + static_cast<double>(j) * cell_width_;
      for (long long c = 0; c < k; ++c) {
        coords.push_back(std::min(h, x0 + cell_width_ * uniform01(gen)));
        coords.push_back(std::min(h, y0 + cell_width_ * uniform01(gen)));
      }
    }
  }
  return PointPattern(window_, std::move(coords));
}

PointPattern sample_lgcp(const CubeWindow& window, const LgcpParams& params, RngSeed seed) {
  return LgcpSampler(window, params).sample(seed);
}

void MaternClusterParams::validate() const {
  require(std::isfinite(parent_intensity) && parent_intensity > 0.0,
          "Matern parent intensity must be positive");
  require(std::isfinite(mean_offspring) && mean_offspring > 0.0,
          "Matern mean offspring count must be positive");
  require(std::isfinite(cluster_radius) && cluster_radius > 0.0,
          "Matern cluster radius must be positive");
}

PointPattern sample_matern_cluster(const CubeWindow& window, const MaternClusterParams& params,
                                   RngSeed seed) {
  params.validate();
  Engine gen = make_engine(seed);
  const int d = window.dimension();
  const auto du = static_cast<std::size_t>(d);
  const double R = params.cluster_radius;
  const double outer = window.side() + 2.0 * R;
  std::poisson_distribution<long long> parent_dist(params.parent_intensity * std::pow(outer, d));
  std::poisson_distribution<long long> child_dist(params.mean_offspring);
  std::normal_distribution<double> normal;
  const long long parents = parent_dist(gen);
  std::vector<double> parent(du), child(du), dir(du), coords;
  for (long long p = 0; p < parents; ++p) {
    for (double& c : parent) c = -0.5 * outer + outer * uniform01(gen);
    const long long kids = child_dist(gen);
    for (long long k = 0; k < kids; ++k) {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (double& c : dir) {
          c = normal(gen);
          norm += c * c;
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      const double radius = R * std::pow(uniform01(gen), 1.0 / d);
      for (std::size_t a = 0; a < du; ++a) child[a] = parent[a] + radius * dir[a] / norm;
      if (window.contains(child)) coords.insert(coords.end(), child.begin(), child.end());
    }
  }
  return PointPattern(window, std::move(coords));
}

}  // namespace ripley
