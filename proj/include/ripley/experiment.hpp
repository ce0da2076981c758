// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ripley/config.hpp"
#include "ripley/limit.hpp"
#include "ripley/models.hpp"

namespace ripley {

struct ExperimentSpec {
  ModelSpec null_model = PoissonModel{};
  ModelSpec data_model = PoissonModel{};
  std::vector<double> volumes;
  std::vector<double> R_values;
  double alpha = 0.05;
  std::size_t replications = 1000;
  std::size_t quantile_paths = kDefaultQuantilePaths;
  /// Null patterns simulated when the null limit has no closed form.
  std::size_t limit_replications = 1000;
  EdgeCorrection correction = EdgeCorrection::Border;
  StatisticKind statistic = StatisticKind::Sup;
  double grid_step = 0.1;
  /// Cells involving a Gibbs model above this volume are skipped.
  double max_gibbs_volume = 10000.0;
  RngSeed seed{1, 0};

  void validate() const;
};

/// Reads [experiment], [null] and [data] sections. See docs/config.md.
ExperimentSpec experiment_from_config(const Config& config);

struct RejectionCell {
  double volume = 0.0;
  double R = 0.0;
  double rejection_pct = 0.0;
  double se_pct = 0.0;
  std::size_t replications = 0;
  /// "ok", "skipped" or "failed: <reason>".
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

struct RejectionTable {
  std::string null_description;
  std::string data_description;
  double alpha = 0.05;
  EdgeCorrection correction = EdgeCorrection::Border;
  StatisticKind statistic = StatisticKind::Sup;
  RngSeed seed;
  std::vector<RejectionCell> cells;

  const RejectionCell& at(double volume, double R) const;
};

/// Binomial standard error in percentage points.
double rejection_se_pct(double rejection_pct, std::size_t replications);

/// Seed of replicate `rep` of the data patterns for window volume n. Shared by
/// all R columns of a row, so every column tests the same patterns.
RngSeed data_pattern_seed(RngSeed seed, double volume, std::size_t rep);

/// Null limit for one window: closed form for Poisson with an unbiased
/// correction, simulation otherwise.
LimitModel null_limit(const ExperimentSpec& spec, const CubeWindow& window, const RGrid& grid);

RejectionTable run_rejection_experiment(const ExperimentSpec& spec);

void write_rejection_csv(std::ostream& out, const RejectionTable& table);

struct ActivityCalibration {
  double activity = 0.0;
  double intensity = 0.0;
  double standard_error = 0.0;
};

/// Bisection on the activity so that the perfect-sampler intensity on
/// `window` matches `target`. Every evaluation reuses the same seeds.
ActivityCalibration calibrate_activity(const GibbsProcess& process, const CubeWindow& window,
                                       double target, std::size_t replications, RngSeed seed,
                                       double low, double high, int iterations = 20);

/// Mean count per unit volume over `replications` perfect draws, and its SE.
std::pair<double, double> gibbs_intensity(const GibbsProcess& process, const CubeWindow& window,
                                          std::size_t replications, RngSeed seed);

}  // namespace ripley
