// SPDX-License-Identifier: Apache-2.0
#include "ripley/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>

#include "ripley/error.hpp"

namespace ripley {

void ExperimentSpec::validate() const {
  require(!volumes.empty(), "experiment needs at least one window volume");
  for (double n : volumes) require(n > 0.0, "window volumes must be positive");
  require(!R_values.empty(), "experiment needs at least one R");
  for (double R : R_values) require(R > 0.0, "R values must be positive");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(replications >= 1, "replications must be >= 1");
  require(quantile_paths >= kMinQuantileSamples, "quantile_paths must be >= 1000");
  require(grid_step > 0.0, "grid_step must be positive");
}

ExperimentSpec experiment_from_config(const Config& config) {
  const Section& e = config.section("experiment");
  ExperimentSpec spec;
  spec.null_model = model_from_section(config.section("null"));
  spec.data_model = config.has("data") ? model_from_section(config.section("data")) : spec.null_model;
  spec.volumes = e.numbers("volumes");
  spec.R_values = e.numbers("R");
  spec.alpha = e.number_or("alpha", spec.alpha);
  spec.replications = static_cast<std::size_t>(e.integer_or("replications", 1000));
  spec.quantile_paths = static_cast<std::size_t>(e.integer_or("quantile_paths", 20000));
  spec.limit_replications = static_cast<std::size_t>(e.integer_or("limit_replications", 1000));
  spec.correction = parse_edge_correction(e.text_or("correction", "border"));
  spec.statistic = parse_statistic_kind(e.text_or("statistic", "sup"));
  spec.grid_step = e.number_or("grid_step", 0.1);
  spec.max_gibbs_volume = e.number_or("max_gibbs_volume", spec.max_gibbs_volume);
  spec.seed = {static_cast<std::uint64_t>(e.integer_or("seed", 1)),
               static_cast<std::uint64_t>(e.integer_or("stream", 0))};
  spec.validate();
  return spec;
}

const RejectionCell& RejectionTable::at(double volume, double R) const {
  for (const auto& c : cells)
    if (std::abs(c.volume - volume) < 1e-9 * volume && std::abs(c.R - R) < 1e-9) return c;
  throw InvalidArgument("no table cell for n=" + std::to_string(volume) + " R=" + std::to_string(R));
}

double rejection_se_pct(double rejection_pct, std::size_t replications) {
  const double p = rejection_pct / 100.0;
  return 100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(replications));
}

namespace {

enum : std::uint64_t { kDataTag = 1, kLimitTag = 2, kQuantileTag = 3 };

std::uint64_t volume_key(double volume) { return std::bit_cast<std::uint64_t>(volume); }

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

// Reason an R column cannot be estimated on this window, or empty.
std::string infeasible_radius(EdgeCorrection correction, const CubeWindow& window, double R) {
  if (correction == EdgeCorrection::Border && !(eroded_volume(window, R) > 0.0))
    return "window too small for radius r = " + std::to_string(R);
  if (correction == EdgeCorrection::RigidMotion && !(R < window.side()))
    return "rigid-motion correction needs r below the window side";
  return {};
}

bool closed_form_null(const ExperimentSpec& spec, const CubeWindow& window) {
  return std::holds_alternative<PoissonModel>(spec.null_model) && window.dimension() == 2 &&
         spec.correction != EdgeCorrection::None;
}

}  // namespace

RngSeed data_pattern_seed(RngSeed seed, double volume, std::size_t rep) {
  return {hash_values({seed.seed, seed.stream, kDataTag, volume_key(volume), rep}), 0};
}

LimitModel null_limit(const ExperimentSpec& spec, const CubeWindow& window, const RGrid& grid) {
  const double rho = model_intensity(spec.null_model);
  if (closed_form_null(spec, window))
    return poisson_limit(grid, rho, spec.correction, window.volume());
  const RngSeed seed{hash_values({spec.seed.seed, spec.seed.stream, kLimitTag,
                                  volume_key(window.volume())}),
                     0};
  return monte_carlo_limit(spec.null_model, window, grid, spec.correction, rho,
                           spec.limit_replications, seed);
}

RejectionTable run_rejection_experiment(const ExperimentSpec& spec) {
  spec.validate();
  RejectionTable table{describe(spec.null_model), describe(spec.data_model), spec.alpha,
                       spec.correction, spec.statistic, spec.seed, {}};
  const double rho = model_intensity(spec.null_model);
  const bool gibbs = is_gibbs(spec.null_model) || is_gibbs(spec.data_model);

  for (double n : spec.volumes) {
    auto fill_row = [&](const std::string& status) {
      for (double R : spec.R_values) table.cells.push_back({n, R, 0.0, 0.0, 0, status});
    };
    if (gibbs && n > spec.max_gibbs_volume) {
      fill_row("skipped");
      continue;
    }
    try {
      const CubeWindow window(2, n);
      std::vector<std::string> cell_error(spec.R_values.size());
      double R_feasible = 0.0;
      for (std::size_t k = 0; k < spec.R_values.size(); ++k) {
        cell_error[k] = infeasible_radius(spec.correction, window, spec.R_values[k]);
        if (cell_error[k].empty()) R_feasible = std::max(R_feasible, spec.R_values[k]);
      }
      if (R_feasible == 0.0) {
        fill_row("failed: " + one_line(cell_error.front()));
        continue;
      }
      const RGrid grid = RGrid::up_to(R_feasible, spec.grid_step);
      const LimitModel limit = null_limit(spec, window, grid);

      std::vector<std::optional<GofCalibration>> calibrations;
      for (std::size_t k = 0; k < spec.R_values.size(); ++k) {
        if (!cell_error[k].empty()) {
          calibrations.emplace_back(std::nullopt);
          continue;
        }
        try {
          const RngSeed qseed{hash_values({spec.seed.seed, spec.seed.stream, kQuantileTag,
                                           volume_key(n), k}),
                              0};
          calibrations.emplace_back(std::in_place, limit, spec.R_values[k], spec.alpha,
                                    spec.statistic, spec.quantile_paths, qseed);
        } catch (const std::exception& e) {
          calibrations.emplace_back(std::nullopt);
          cell_error[k] = e.what();
        }
      }

      const PatternSampler sampler(spec.data_model, window);
      const std::size_t reps = spec.replications;
      std::vector<unsigned char> rejected(reps * spec.R_values.size(), 0);
      std::string error;
#pragma omp parallel for schedule(dynamic)
      for (std::size_t rep = 0; rep < reps; ++rep) {
        try {
          const auto pattern = sampler.sample(data_pattern_seed(spec.seed, n, rep));
          const auto curve = estimate_k(pattern, rho, grid, spec.correction);
          for (std::size_t k = 0; k < calibrations.size(); ++k)
            if (calibrations[k])
              rejected[rep * spec.R_values.size() + k] = calibrations[k]->test(curve).reject;
        } catch (const std::exception& e) {
#pragma omp critical(ripley_experiment_error)
          if (error.empty()) error = e.what();
        }
      }
      if (!error.empty()) {
        fill_row("failed: " + one_line(error));
        continue;
      }
      for (std::size_t k = 0; k < spec.R_values.size(); ++k) {
        RejectionCell cell{n, spec.R_values[k], 0.0, 0.0, reps, "ok"};
        if (!calibrations[k]) {
          cell.replications = 0;
          cell.status = "failed: " + one_line(cell_error[k]);
        } else {
          std::size_t count = 0;
          for (std::size_t rep = 0; rep < reps; ++rep) count += rejected[rep * spec.R_values.size() + k];
          cell.rejection_pct = 100.0 * static_cast<double>(count) / static_cast<double>(reps);
          cell.se_pct = rejection_se_pct(cell.rejection_pct, reps);
        }
        table.cells.push_back(cell);
      }
    } catch (const std::exception& e) {
      fill_row("failed: " + one_line(e.what()));
    }
  }
  return table;
}

void write_rejection_csv(std::ostream& out, const RejectionTable& table) {
  out << std::setprecision(10);
  out << "# null=" << table.null_description << " data=" << table.data_description
      << " alpha=" << table.alpha << " correction=" << to_string(table.correction)
      << " statistic=" << to_string(table.statistic) << " seed=" << table.seed.seed
      << " stream=" << table.seed.stream << '\n';
  out << "n,R,rejection_pct,se_pct,replications,status\n";
  for (const auto& c : table.cells)
    out << c.volume << ',' << c.R << ',' << c.rejection_pct << ',' << c.se_pct << ','
        << c.replications << ',' << c.status << '\n';
}

std::pair<double, double> gibbs_intensity(const GibbsProcess& process, const CubeWindow& window,
                                          std::size_t replications, RngSeed seed) {
  require(replications >= 2, "intensity estimate needs at least two replications");
  std::vector<double> counts(replications);
  std::string error;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < replications; ++i) {
    try {
      counts[i] = static_cast<double>(
          sample_gibbs_perfect(window, process.model, seed.substream(i), process.options).pattern.size());
    } catch (const std::exception& e) {
#pragma omp critical(ripley_intensity_error)
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw RuntimeError("perfect sampling failed: " + error);
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= static_cast<double>(replications);
  double ss = 0.0;
  for (double c : counts) ss += (c - mean) * (c - mean);
  const double sd = std::sqrt(ss / static_cast<double>(replications - 1));
  return {mean / window.volume(),
          sd / std::sqrt(static_cast<double>(replications)) / window.volume()};
}

ActivityCalibration calibrate_activity(const GibbsProcess& process, const CubeWindow& window,
                                       double target, std::size_t replications, RngSeed seed,
                                       double low, double high, int iterations) {
  require(target > 0.0, "target intensity must be positive");
  require(0.0 < low && low < high, "need 0 < low < high");
  auto eval = [&](double tau) {
    GibbsProcess p = process;
    p.model = process.model.with_activity(tau);
    return gibbs_intensity(p, window, replications, seed);
  };
  ActivityCalibration best{};
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (low + high);
    const auto [rho, se] = eval(mid);
    best = {mid, rho, se};
    if (rho < target) low = mid;
    else high = mid;
  }
  return best;
}

}  // namespace ripley
