// SPDX-License-Identifier: Apache-2.0
// Command-line front end: simulate, estimate, limit, gof, table, clanprobe,
// calibrate. Exit status 0 on success, 2 on usage errors, 1 otherwise.
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ripley/config.hpp"
#include "ripley/curve_io.hpp"
#include "ripley/error.hpp"
#include "ripley/experiment.hpp"
#include "ripley/limit_io.hpp"
#include "ripley/models.hpp"
#include "ripley/pattern_io.hpp"

using namespace ripley;

namespace {

// Keys accepted by model_from_section; each becomes a --<key> flag.
const std::vector<std::string> kModelKeys = {
    "model",  "rho",        "sigma2",      "scale",     "mu",
    "resolution", "field_method", "kappa", "offspring", "cluster_radius",
    "gamma",  "interaction_radius", "tau",  "hardcore",  "beta",
    "intensity", "padding", "event_budget", "disk_radius", "area_resolution",
    "ball_radius", "k"};

struct ModelFlags {
  std::map<std::string, std::string> values;
  std::string config;
  std::string section = "null";

  void attach(CLI::App* cmd) {
    for (const auto& key : kModelKeys) cmd->add_option("--" + key, values[key], "model parameter");
    cmd->add_option("--config", config, "read the model from this config file instead");
    cmd->add_option("--section", section, "config section holding the model")->capture_default_str();
  }

  ModelSpec build() const {
    if (!config.empty()) return model_from_section(load_config(config).section(section));
    Section s("command line");
    for (const auto& [key, value] : values)
      if (!value.empty()) s.set(key, value);
    if (!s.has("model")) throw InvalidArgument("--model is required");
    return model_from_section(s);
  }
};

// Writes to `path`, or stdout for "" and "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot open '" + path + "' for writing");
  fn(out);
}

RngSeed seed_of(std::uint64_t seed, std::uint64_t stream) { return {seed, stream}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ripley: K-function estimation, Gibbs perfect simulation and goodness-of-fit tests"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  std::uint64_t seed = 1, stream = 0;
  double volume = 100.0;
  int dimension = 2;
  std::string out_path;

  // simulate
  ModelFlags sim_model;
  auto* simulate = app.add_subcommand("simulate", "draw one pattern and write it as CSV");
  sim_model.attach(simulate);
  simulate->add_option("--n", volume, "window volume")->capture_default_str();
  simulate->add_option("--d", dimension, "dimension (Poisson and Matern only)")->capture_default_str();
  simulate->add_option("--seed", seed)->capture_default_str();
  simulate->add_option("--stream", stream)->capture_default_str();
  simulate->add_option("--out", out_path, "output file (default stdout)");

  // estimate
  std::string pattern_path, statistic = "K", correction = "border";
  double rho = 1.0, R = 1.0, step = 0.1, bandwidth = kDefaultBandwidth;
  auto* estimate = app.add_subcommand("estimate", "estimate K, pcf or nn on a pattern");
  estimate->add_option("--pattern", pattern_path, "pattern CSV")->required();
  estimate->add_option("--statistic", statistic, "K, pcf or nn")->capture_default_str();
  estimate->add_option("--correction", correction, "none, translation, rigid, border, isotropic")
      ->capture_default_str();
  estimate->add_option("--rho", rho, "known intensity")->capture_default_str();
  estimate->add_option("--R", R, "largest radius")->capture_default_str();
  estimate->add_option("--step", step, "grid step")->capture_default_str();
  estimate->add_option("--start", "first radius (pcf needs r > bandwidth)");
  estimate->add_option("--bandwidth", bandwidth)->capture_default_str();
  estimate->add_option("--out", out_path);

  // limit
  ModelFlags limit_model;
  std::size_t replications = 1000;
  std::string method = "auto";
  auto* limit = app.add_subcommand("limit", "compute a null LimitModel directory");
  limit_model.attach(limit);
  limit->add_option("--n", volume)->capture_default_str();
  limit->add_option("--R", R)->capture_default_str();
  limit->add_option("--step", step)->capture_default_str();
  limit->add_option("--correction", correction)->capture_default_str();
  limit->add_option("--replications", replications, "null patterns for the simulated limit")
      ->capture_default_str();
  limit->add_option("--method", method, "auto, closed or mc")->capture_default_str();
  limit->add_option("--seed", seed)->capture_default_str();
  limit->add_option("--stream", stream)->capture_default_str();
  limit->add_option("--out", out_path, "output directory")->required();

  // gof
  std::string limit_dir, kind = "sup";
  double alpha = 0.05;
  std::size_t paths = kDefaultQuantilePaths;
  std::optional<double> gof_rho;
  auto* gof = app.add_subcommand("gof", "test a pattern against a LimitModel");
  gof->add_option("--pattern", pattern_path)->required();
  gof->add_option("--limit", limit_dir, "LimitModel directory")->required();
  gof->add_option("--alpha", alpha)->capture_default_str();
  gof->add_option("--R", R)->capture_default_str();
  gof->add_option("--statistic", kind, "sup or integral")->capture_default_str();
  gof->add_option("--paths", paths, "Gaussian paths for the quantile")->capture_default_str();
  gof->add_option("--rho", gof_rho, "known intensity (default: the limit's)");
  gof->add_option("--seed", seed)->capture_default_str();
  gof->add_option("--stream", stream)->capture_default_str();

  // table
  std::string config_path;
  std::optional<std::size_t> table_reps;
  auto* table = app.add_subcommand("table", "run a rejection-rate experiment from a config file");
  table->add_option("--config", config_path)->required();
  table->add_option("--replications", table_reps, "override [experiment] replications");
  table->add_option("--out", out_path);

  // clanprobe
  ModelFlags probe_model;
  int k_max = 10;
  auto* probe = app.add_subcommand("clanprobe", "empirical ancestor-clan diameter tail");
  probe_model.attach(probe);
  probe->add_option("--replications", replications)->capture_default_str();
  probe->add_option("--kmax", k_max)->capture_default_str();
  probe->add_option("--seed", seed)->capture_default_str();
  probe->add_option("--stream", stream)->capture_default_str();
  probe->add_option("--out", out_path);

  // calibrate
  ModelFlags cal_model;
  double target = 1.0, low = 0.5, high = 0.0;
  int iterations = 20;
  auto* calibrate = app.add_subcommand("calibrate", "bisect the Gibbs activity to a target intensity");
  cal_model.attach(calibrate);
  calibrate->add_option("--n", volume)->capture_default_str();
  calibrate->add_option("--target", target)->capture_default_str();
  calibrate->add_option("--low", low)->capture_default_str();
  calibrate->add_option("--high", high, "default: the admissibility limit");
  calibrate->add_option("--iterations", iterations)->capture_default_str();
  calibrate->add_option("--replications", replications)->capture_default_str();
  calibrate->add_option("--seed", seed)->capture_default_str();
  calibrate->add_option("--stream", stream)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*simulate) {
      const ModelSpec model = sim_model.build();
      const CubeWindow window(dimension, volume);
      const PatternSampler sampler(model, window);
      const auto pattern = sampler.sample(seed_of(seed, stream));
      with_output(out_path, [&](std::ostream& out) { write_pattern_csv(out, pattern); });
    } else if (*estimate) {
      const auto pattern = load_pattern(pattern_path);
      const Statistic stat = parse_statistic(statistic);
      double start = 0.0;
      if (auto* opt = estimate->get_option("--start"); opt->count()) start = opt->as<double>();
      else if (stat == Statistic::Pcf) start = step * std::floor(bandwidth / step + 1.0);
      require(R >= start, "R must be at least the first radius");
      const RGrid grid(start, step, static_cast<std::size_t>(std::floor((R - start) / step + 1e-9)) + 1);
      CurveEstimate curve = [&] {
        switch (stat) {
          case Statistic::K: return estimate_k(pattern, rho, grid, parse_edge_correction(correction));
          case Statistic::Pcf: return estimate_pcf(pattern, rho, grid, bandwidth);
          case Statistic::NearestNeighbour: break;
        }
        return estimate_nn(pattern, rho, grid);
      }();
      with_output(out_path, [&](std::ostream& out) { write_curve_csv(out, curve); });
    } else if (*limit) {
      const ModelSpec model = limit_model.build();
      const CubeWindow window(2, volume);
      const RGrid grid = RGrid::up_to(R, step);
      const EdgeCorrection corr = parse_edge_correction(correction);
      const double intensity = model_intensity(model);
      LimitModel result = [&] {
        const bool poisson = std::holds_alternative<PoissonModel>(model);
        if (method == "closed" || (method == "auto" && poisson && corr != EdgeCorrection::None)) {
          require(poisson, "closed-form limit is only available for Poisson");
          return poisson_limit(grid, intensity, corr, volume);
        }
        require(method == "auto" || method == "mc", "--method must be auto, closed or mc");
        return monte_carlo_limit(model, window, grid, corr, intensity, replications,
                                 seed_of(seed, stream));
      }();
      save_limit(out_path, result);
      std::cout << "wrote " << out_path << " (" << result.provenance.kind << ")\n";
    } else if (*gof) {
      const auto pattern = load_pattern(pattern_path);
      const LimitModel lm = load_limit(limit_dir);
      const StatisticKind sk = parse_statistic_kind(kind);
      const GofResult res = gof_test(pattern, lm, alpha, R, sk, lm.correction, gof_rho.value_or(lm.rho),
                                     paths, seed_of(seed, stream));
      std::cout << std::setprecision(10) << (res.reject ? "REJECT" : "ACCEPT")
                << " statistic=" << res.statistic << " q=" << res.quantile << '\n';
      nlohmann::json j = {{"reject", res.reject}, {"statistic", res.statistic},
                          {"quantile", res.quantile}, {"alpha", res.alpha}, {"R", res.R},
                          {"kind", std::string(to_string(res.kind))}, {"n", lm.volume},
                          {"paths", paths}};
      std::cout << j.dump() << '\n';
    } else if (*table) {
      ExperimentSpec spec = experiment_from_config(load_config(config_path));
      if (table_reps) spec.replications = *table_reps;
      const RejectionTable result = run_rejection_experiment(spec);
      with_output(out_path, [&](std::ostream& out) { write_rejection_csv(out, result); });
    } else if (*probe) {
      const ModelSpec model = probe_model.build();
      const auto* g = std::get_if<GibbsProcess>(&model);
      require(g != nullptr, "clanprobe needs a Gibbs model");
      const auto tail = clan_tail_probe(g->model, replications, seed_of(seed, stream), k_max);
      with_output(out_path, [&](std::ostream& out) {
        out << std::setprecision(10) << "# model=" << g->model.describe()
            << " replications=" << replications << " lambda=" << g->model.branching_rate() << '\n';
        out << "k,empirical_tail,standard_error,bound\n";
        for (const auto& t : tail)
          out << t.k << ',' << t.empirical_tail << ',' << t.standard_error << ',' << t.bound << '\n';
      });
    } else if (*calibrate) {
      const ModelSpec model = cal_model.build();
      const auto* g = std::get_if<GibbsProcess>(&model);
      require(g != nullptr, "calibrate needs a Gibbs model");
      if (high <= 0.0) high = (1.0 - 1e-9) / (std::numbers::pi * g->model.range() * g->model.range());
      const auto res = calibrate_activity(*g, CubeWindow(2, volume), target, replications,
                                          seed_of(seed, stream), low, high, iterations);
      std::cout << std::setprecision(10) << "activity=" << res.activity
                << " intensity=" << res.intensity << " se=" << res.standard_error << '\n';
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
