// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ripley/error.hpp"
#include "ripley/estimators.hpp"
#include "ripley/gaussian_field.hpp"
#include "ripley/samplers.hpp"
#include "support/oracles.hpp"

using namespace ripley;

TEST(Rng, SubstreamsDifferAndRepeat) {
  const RngSeed s{7, 0};
  EXPECT_EQ(s.substream(3), s.substream(3));
  EXPECT_NE(s.substream(3), s.substream(4));
  EXPECT_NE(s.substream(3).substream(0), s.substream(0).substream(3));
  Engine a = make_engine(s), b = make_engine(s), c = make_engine({7, 1});
  EXPECT_EQ(a(), b());
  EXPECT_NE(make_engine(s)(), c());
}

TEST(SamplePoisson, MeanCount) {
  const CubeWindow w(2, 100.0);
  std::vector<double> counts;
  for (std::uint64_t i = 0; i < 10000; ++i)
    counts.push_back(static_cast<double>(sample_poisson(w, 1.0, {1, i}).size()));
  EXPECT_NEAR(oracle::mean(counts), 100.0, 0.3);
  EXPECT_NEAR(oracle::sample_sd(counts), 10.0, 0.3);
}

TEST(SamplePoisson, RejectsBadIntensityAndIsDeterministic) {
  const CubeWindow w(2, 100.0);
  EXPECT_THROW(sample_poisson(w, 0.0, {1, 0}), InvalidArgument);
  EXPECT_THROW(sample_poisson(w, -1.0, {1, 0}), InvalidArgument);
  const auto a = sample_poisson(w, 1.0, {9, 2}), b = sample_poisson(w, 1.0, {9, 2});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.coordinates().size(); ++i)
    EXPECT_EQ(a.coordinates()[i], b.coordinates()[i]);
}

TEST(SamplePoisson, UniformMarginalsInThreeDimensions) {
  const CubeWindow w(3, 1000.0);
  const auto p = sample_poisson(w, 2.0, {3, 3});
  double sum = 0.0, sq = 0.0;
  for (double c : p.coordinates()) {
    sum += c;
    sq += c * c;
  }
  const double n = static_cast<double>(p.coordinates().size());
  EXPECT_NEAR(sum / n, 0.0, 4.0 * std::sqrt(100.0 / 12.0 / n));
  EXPECT_NEAR(sq / n, 100.0 / 12.0, 0.3);
}

TEST(GaussianField, DenseCovarianceAndJitter) {
  const GaussianFieldSampler f(6, 1.0, 0.5, 2.0, FieldMethod::Dense);
  const Eigen::MatrixXd c = f.covariance();
  EXPECT_DOUBLE_EQ(c(0, 0), 0.5);
  EXPECT_NEAR(c(0, 1), 0.5 * std::exp(-0.5), 1e-15);
  EXPECT_NEAR(c(0, 7), 0.5 * std::exp(-std::sqrt(2.0) / 2.0), 1e-15);
  // Nearly singular: tiny cells relative to the scale still factorize.
  EXPECT_NO_THROW(GaussianFieldSampler(20, 1e-3, 1.0, 1e3, FieldMethod::Dense));
}

namespace {

// Empirical variance and lag-1 covariance along x, pooled over the grid.
std::pair<double, double> field_moments(const GaussianFieldSampler& f, int draws) {
  Engine gen = make_engine({17, 0});
  const std::size_t m = f.cells_per_axis();
  double var = 0.0, lag = 0.0;
  std::size_t nv = 0, nl = 0;
  for (int d = 0; d < draws; ++d) {
    const auto z = f.sample(gen);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        var += z[j * m + i] * z[j * m + i];
        ++nv;
        if (i + 1 < m) {
          lag += z[j * m + i] * z[j * m + i + 1];
          ++nl;
        }
      }
  }
  return {var / static_cast<double>(nv), lag / static_cast<double>(nl)};
}

}  // namespace

TEST(GaussianField, DenseAndCirculantMatchTheCovariance) {
  for (auto method : {FieldMethod::Dense, FieldMethod::Circulant}) {
    const GaussianFieldSampler f(12, 1.0, 0.2, 2.0, method);
    const auto [var, lag] = field_moments(f, 4000);
    EXPECT_NEAR(var, 0.2, 0.2 * 0.03) << to_string(method);
    EXPECT_NEAR(lag, 0.2 * std::exp(-0.5), 0.2 * 0.04) << to_string(method);
  }
}

TEST(GaussianField, AutoSwitchesOnCellCount) {
  EXPECT_EQ(GaussianFieldSampler(64, 1.0, 0.2, 2.0).method(), FieldMethod::Dense);
  const GaussianFieldSampler big(100, 1.0, 0.2, 2.0);
  EXPECT_EQ(big.method(), FieldMethod::Circulant);
  EXPECT_GE(big.embedding_size(), 200u);
}

TEST(SampleLgcp, IntensityConverges) {
  const CubeWindow w(2, 400.0);
  const LgcpSampler sampler(w, LgcpParams::unit_intensity(0.2, 2.0));
  std::vector<double> counts;
  for (std::uint64_t i = 0; i < 1000; ++i)
    counts.push_back(static_cast<double>(sampler.sample({5, i}).size()) / 400.0);
  EXPECT_NEAR(oracle::mean(counts), 1.0, 3.0 * oracle::standard_error(counts));
  // Clustering inflates the count variance above the Poisson value 1/400.
  EXPECT_GT(oracle::sample_sd(counts), std::sqrt(1.0 / 400.0) * 1.5);
}

TEST(SampleLgcp, ZeroVarianceIsPoisson) {
  const CubeWindow w(2, 100.0);
  const LgcpSampler sampler(w, LgcpParams::unit_intensity(0.0, 2.0));
  std::vector<double> lgcp, poisson;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    lgcp.push_back(static_cast<double>(sampler.sample({6, i}).size()));
    poisson.push_back(static_cast<double>(sample_poisson(w, 1.0, {60, i}).size()));
  }
  EXPECT_NEAR(oracle::mean(lgcp), 100.0, 3.0 * oracle::standard_error(lgcp));
  EXPECT_LT(oracle::ks_two_sample(lgcp, poisson), oracle::ks_two_sample_critical_1pct(2000, 2000));
}

TEST(SampleLgcp, StrongFieldClusters) {
  LgcpParams p = LgcpParams::unit_intensity(1.0, 2.0);
  const CubeWindow w(2, 400.0);
  const LgcpSampler sampler(w, p);
  const RGrid grid(0.5, 0.25, 3);
  std::vector<double> g(3, 0.0);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto c = estimate_pcf(sampler.sample({7, i}), 1.0, grid);
    for (int k = 0; k < 3; ++k) g[k] += c.values[k] / 200.0;
  }
  // g(r) = exp(c(r)) = exp(exp(-r/2)), about 2.2 at r = 0.5.
  for (double v : g) EXPECT_GT(v, 1.5);
}

TEST(SampleLgcp, RejectsBadParams) {
  const CubeWindow w(2, 100.0);
  LgcpParams p = LgcpParams::unit_intensity(0.2, 2.0);
  p.scale = 0.0;
  EXPECT_THROW(LgcpSampler(w, p), InvalidArgument);
  p = LgcpParams::unit_intensity(-1.0, 2.0);
  EXPECT_THROW(LgcpSampler(w, p), InvalidArgument);
  p = LgcpParams::unit_intensity(0.2, 2.0);
  p.grid_resolution = 0.5;
  EXPECT_THROW(LgcpSampler(w, p), InvalidArgument);
  EXPECT_THROW(LgcpSampler(CubeWindow(3, 27.0), LgcpParams::unit_intensity(0.2, 2.0)), InvalidArgument);
}

TEST(SampleMatern, MeanCount) {
  const CubeWindow w(2, 400.0);
  const MaternClusterParams p{0.5, 4.0, 0.3};
  std::vector<double> counts;
  for (std::uint64_t i = 0; i < 2000; ++i)
    counts.push_back(static_cast<double>(sample_matern_cluster(w, p, {8, i}).size()));
  EXPECT_NEAR(oracle::mean(counts), 800.0, 3.0 * oracle::standard_error(counts));
  EXPECT_THROW(sample_matern_cluster(w, {0.0, 1.0, 1.0}, {1, 0}), InvalidArgument);
  EXPECT_THROW(sample_matern_cluster(w, {1.0, 0.0, 1.0}, {1, 0}), InvalidArgument);
}

TEST(SampleMatern, ClustersAtShortRange) {
  const CubeWindow w(2, 400.0);
  const MaternClusterParams p{0.25, 4.0, 0.5};
  const RGrid grid(0.3, 0.2, 3);
  std::vector<double> g(3, 0.0);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto c = estimate_pcf(sample_matern_cluster(w, p, {9, i}), 1.0, grid);
    for (int k = 0; k < 3; ++k) g[k] += c.values[k] / 200.0;
  }
  for (double v : g) EXPECT_GT(v, 1.5);
}
