// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ripley/geometry.hpp"
#include "ripley/miniball.hpp"
#include "ripley/rng.hpp"

namespace ripley {

/// Piecewise-constant pair potential: +inf on [0, hardcore_radius], then
/// values[i] on (breaks[i-1], breaks[i]] (with breaks[-1] = hardcore_radius),
/// and 0 beyond the last break.
struct PairPotential {
  double hardcore_radius = 0.0;
  std::vector<double> breaks;
  std::vector<double> values;

  /// phi = -log(gamma) on [0, radius]; gamma = 0 gives a hard core.
  static PairPotential strauss(double gamma, double radius);
  static PairPotential hardcore_strauss(double hardcore, double gamma, double radius);

  double operator()(double t) const;
  double range() const;
  void validate() const;
};

/// Psi(X) = |union of disks of disk_radius about the points|. The uncovered
/// area of a new disk is estimated on a resolution x resolution sub-grid.
struct AreaInteraction {
  double disk_radius = 0.0;
  int resolution = 64;

  double range() const { return 2.0 * disk_radius; }
};

/// Psi(X) = +inf if some ball of ball_radius holds k or more points, else 0.
struct HardKBall {
  double ball_radius = 0.0;
  int k = 3;

  double range() const { return 2.0 * ball_radius; }
};

using GibbsFamily = std::variant<PairPotential, AreaInteraction, HardKBall>;

/// Finite-range planar Gibbs model with activity tau and inverse temperature
/// beta. Construction enforces tau·pi·range^2 < 1.
class GibbsModel {
 public:
  GibbsModel(GibbsFamily family, double activity, double inverse_temperature);

  const GibbsFamily& family() const noexcept { return family_; }
  double activity() const noexcept { return activity_; }
  double inverse_temperature() const noexcept { return beta_; }
  double range() const noexcept { return range_; }

  /// Mean offspring count of the dominating branching process.
  double branching_rate() const noexcept;

  GibbsModel with_activity(double activity) const { return {family_, activity, beta_}; }

  std::string describe() const;

 private:
  GibbsFamily family_;
  double activity_;
  double beta_;
  double range_;
};

/// Energy increment Psi(config ∪ {x}) - Psi(config). Only config points
/// within the interaction range of x contribute. May be +inf.
double delta_psi(const Vec2& x, std::span<const Vec2> config, const GibbsModel& model);
double delta_psi(std::span<const double> x, const PointPattern& config, const GibbsModel& model);

struct ClanStats {
  std::size_t clan_size = 1;
  double clan_diameter = 0.0;
  std::size_t generations = 0;
};

struct ClanSummary {
  std::size_t clans = 0;
  double mean_size = 0.0;
  std::size_t max_size = 0;
  double max_diameter = 0.0;
  std::size_t max_generations = 0;
  std::size_t resolved_events = 0;
  std::size_t generated_events = 0;
};

struct PerfectSamplerOptions {
  /// Margin added around the window; nullopt selects default_padding().
  std::optional<double> padding;
  std::size_t event_budget = 100'000'000;
  /// Backward time step used when a cell must be extended to find a birth.
  double time_chunk = 1.0;
};

/// Smallest 2k·range such that n·tau·lambda^k < tolerance.
double default_padding(const CubeWindow& window, const GibbsModel& model,
                       double tolerance = 1e-4);

struct GibbsSample {
  PointPattern pattern;
  ClanSummary clans;
};

/// Exact draw from the Gibbs law on D = window ⊕ padding (square margin),
/// cropped to the window. Built from the stationary free birth-death process
/// of rate tau on D, traced backwards through ancestor clans of the points
/// alive at time 0 and then thinned forwards in birth order.
GibbsSample sample_gibbs_perfect(const CubeWindow& window, const GibbsModel& model, RngSeed seed,
                                 const PerfectSamplerOptions& options = {});

/// Per-target clan statistics of one perfect-sampler run, for diagnostics.
std::vector<ClanStats> sample_clan_stats(const CubeWindow& window, const GibbsModel& model,
                                         RngSeed seed, const PerfectSamplerOptions& options = {});

struct ClanTailPoint {
  int k = 0;
  double empirical_tail = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
};

/// Empirical P(diam B(x) > 2k·range), k = 1..k_max, for the ancestor clan of
/// a point born at the origin at time 0 in the unbounded free process.
std::vector<ClanTailPoint> clan_tail_probe(const GibbsModel& model, std::size_t replications,
                                           RngSeed seed, int k_max = 10);

}  // namespace ripley
