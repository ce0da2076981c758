// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ripley/estimators.hpp"
#include "ripley/models.hpp"
#include "ripley/rng.hpp"

namespace ripley {

struct LimitProvenance {
  std::string kind;  // "closed_form_poisson" or "monte_carlo"
  std::size_t replications = 0;
  std::string model;
};

/// Mean curve of K-hat and the limiting covariance of sqrt(n)·K-hat on a
/// grid, for one null model, window volume and edge correction.
struct LimitModel {
  RGrid grid;
  std::vector<double> mean_curve;
  Eigen::MatrixXd covariance;
  EdgeCorrection correction = EdgeCorrection::Border;
  double rho = 1.0;
  double volume = 0.0;
  LimitProvenance provenance;

  /// Checks sizes, symmetry (1e-10 relative) and that no eigenvalue is
  /// below -1e-8·trace/dim.
  void validate() const;
};

/// 2π·min(r1,r2)^2/ρ^2 + 4π^2·r1^2·r2^2/ρ for planar Poisson.
double poisson_limit_covariance(double r1, double r2, double rho, int dimension = 2);

/// Closed-form limit for planar Poisson: mean πr^2 (exact for unbiased
/// corrections) and the covariance above.
LimitModel poisson_limit(const RGrid& grid, double rho, EdgeCorrection correction, double volume);

inline constexpr std::size_t kMinLimitReplications = 100;

/// K-hat curves of M independent draws, one row per replicate (row i uses
/// seed.substream(i)).
Eigen::MatrixXd replicate_k_curves(const PatternSampler& sampler, double rho, const RGrid& grid,
                                   EdgeCorrection correction, std::size_t replications,
                                   RngSeed seed);

/// Mean and n·covariance of K-hat from M simulated null patterns.
LimitModel monte_carlo_limit(const ModelSpec& model, const CubeWindow& window, const RGrid& grid,
                             EdgeCorrection correction, double rho, std::size_t replications,
                             RngSeed seed);

/// Centered Gaussian vectors with a given covariance via a Cholesky factor.
/// Jitter eps·I is added starting at 1e-10·trace/dim and doubled up to
/// 1e-6·trace/dim until the factorization succeeds.
class GaussianPathSampler {
 public:
  explicit GaussianPathSampler(const Eigen::MatrixXd& covariance);

  Eigen::Index dimension() const noexcept { return factor_.rows(); }
  double jitter() const noexcept { return jitter_; }
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

  /// `count` draws of the leading `leading` coordinates, one per row. Paths
  /// are generated in blocks with per-block substreams, so the output does
  /// not depend on the thread count.
  Eigen::MatrixXd sample(std::size_t count, Eigen::Index leading, RngSeed seed) const;

 private:
  Eigen::MatrixXd factor_;
  double jitter_ = 0.0;
};

enum class StatisticKind { Sup, Integral };

std::string_view to_string(StatisticKind kind);
StatisticKind parse_statistic_kind(std::string_view name);

/// Trapezoidal integral of |values| over the first `count` grid points.
double trapezoid_abs(std::span<const double> values, std::size_t count, double step);

/// Draws of sup_{r in grid ∩ [0,R]} |Y(r)|.
std::vector<double> sample_sup_statistics(const LimitModel& limit, double R, std::size_t paths,
                                          RngSeed seed);

/// Draws of the trapezoidal integral of |Y(r)| over [0, R].
std::vector<double> sample_integral_statistics(const LimitModel& limit, double R,
                                               std::size_t paths, RngSeed seed);

inline constexpr std::size_t kMinQuantileSamples = 1000;

/// Empirical (1 - alpha)-quantile with linear interpolation between order
/// statistics (position (N-1)(1-alpha)).
double estimate_quantile(std::span<const double> samples, double alpha);

/// max over grid points r <= R of sqrt(n)·|K-hat(r) - mean(r)|.
double ks_statistic(const CurveEstimate& curve, std::span<const double> mean_curve, double R);

/// Trapezoidal integral over [0, R] of sqrt(n)·|K-hat(r) - mean(r)|.
double integral_statistic(const CurveEstimate& curve, std::span<const double> mean_curve, double R);

struct GofResult {
  double statistic = 0.0;
  double quantile = 0.0;
  double alpha = 0.05;
  bool reject = false;
  double R = 0.0;
  StatisticKind kind = StatisticKind::Sup;
};

inline constexpr std::size_t kDefaultQuantilePaths = 20000;

/// Critical value for one (limit, R, alpha, statistic) combination, reusable
/// across many observed patterns.
class GofCalibration {
 public:
  GofCalibration(const LimitModel& limit, double R, double alpha, StatisticKind kind,
                 std::size_t paths, RngSeed seed);

  double quantile() const noexcept { return quantile_; }
  double R() const noexcept { return R_; }

  double statistic(const CurveEstimate& curve) const;
  GofResult test(const CurveEstimate& curve) const;

 private:
  std::vector<double> mean_;
  RGrid grid_;
  double R_;
  double alpha_;
  StatisticKind kind_;
  double quantile_;
};

/// Full goodness-of-fit procedure for one pattern.
GofResult gof_test(const PointPattern& pattern, const LimitModel& limit, double alpha, double R,
                   StatisticKind kind, EdgeCorrection correction, double rho, std::size_t paths,
                   RngSeed seed);

}  // namespace ripley
