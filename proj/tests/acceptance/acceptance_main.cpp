// Acceptance checks. Prints one PASS/FAIL line per criterion; pass criterion
// numbers as arguments to run a subset. Exit status is 1 if any check fails,
// except those listed with --known-red=6,... which still print FAIL.
#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ripley/estimators.hpp"
#include "ripley/experiment.hpp"
#include "ripley/geometry.hpp"
#include "ripley/gibbs.hpp"
#include "ripley/limit.hpp"
#include "ripley/models.hpp"
#include "ripley/rng.hpp"
#include "ripley/samplers.hpp"
#include "support/oracles.hpp"

using namespace ripley;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::size_t nearest_index(const RGrid& grid, double r) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - r) < std::abs(grid[best] - r)) best = i;
  return best;
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), m.col(j).data() + m.rows()};
}

Outcome fast_matches_brute() {
  const RGrid grid = RGrid::up_to(2.0, 0.1);
  SplitMix64 gen(101);
  double worst = 0.0;
  std::size_t largest = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const CubeWindow w(2, 50.0 + 300.0 * uniform01(gen));
    const auto p = sample_poisson(w, 1.0, {101, i});
    if (p.size() > 500) return {false, "pattern larger than 500 points"};
    largest = std::max(largest, p.size());
    for (auto c : {EdgeCorrection::None, EdgeCorrection::Translation, EdgeCorrection::RigidMotion,
                   EdgeCorrection::Border, EdgeCorrection::Isotropic}) {
      const auto fast = estimate_k(p, 1.0, grid, c);
      const auto slow = brute_force_k(p, 1.0, grid, c);
      for (std::size_t g = 0; g < grid.size(); ++g)
        worst = std::max(worst, std::abs(fast.values[g] - slow.values[g]));
    }
  }
  return {worst <= 1e-12, fmt("max |fast - brute| = %.3g over 200 patterns (N <= %zu)", worst,
                              largest)};
}

Outcome unbiased_poisson() {
  const CubeWindow w(2, 2500.0);
  const RGrid grid(0.5, 0.5, 4);
  const PatternSampler sampler(PoissonModel{1.0}, w);
  bool pass = true;
  std::ostringstream out;
  for (auto c : {EdgeCorrection::Translation, EdgeCorrection::Border}) {
    const auto curves = replicate_k_curves(sampler, 1.0, grid, c, 2000, {202, 0});
    for (double r : {0.5, 1.0, 2.0}) {
      const auto col = column(curves, static_cast<Eigen::Index>(nearest_index(grid, r)));
      const double z = (oracle::mean(col) - kPi * r * r) / oracle::standard_error(col);
      pass = pass && std::abs(z) <= 3.0;
      out << to_string(c) << " r=" << r << " z=" << fmt("%+.2f", z) << "; ";
    }
  }
  return {pass, out.str()};
}

Outcome uncorrected_bias_decay() {
  const RGrid grid(1.0, 0.1, 1);
  std::vector<double> gaps;
  std::ostringstream out;
  for (double side : {25.0, 50.0, 100.0}) {
    const CubeWindow w = CubeWindow::with_side(2, side);
    const PatternSampler sampler(PoissonModel{1.0}, w);
    const auto curves = replicate_k_curves(sampler, 1.0, grid, EdgeCorrection::None, 2000,
                                           {303, static_cast<std::uint64_t>(side)});
    const auto col = column(curves, 0);
    gaps.push_back(kPi - oracle::mean(col));
    out << fmt("gap(%g^2)=%.4f+-%.4f ", side, gaps.back(), oracle::standard_error(col));
  }
  const double q1 = gaps[1] / gaps[0], q2 = gaps[2] / gaps[1];
  const bool pass = gaps[0] > gaps[1] && gaps[1] > gaps[2] && std::abs(q1 - 0.5) <= 0.15 &&
                    std::abs(q2 - 0.5) <= 0.15;
  out << fmt("ratios %.3f %.3f", q1, q2);
  return {pass, out.str()};
}

// Border K-hat(1) values shared by the covariance and normality checks.
std::vector<double> g_border_k1;

Outcome poisson_covariance() {
  const CubeWindow w(2, 10000.0);
  const RGrid grid = RGrid::up_to(2.0, 0.1);
  const auto i1 = static_cast<Eigen::Index>(nearest_index(grid, 1.0));
  const auto i2 = static_cast<Eigen::Index>(nearest_index(grid, 2.0));
  const double c11 = poisson_limit_covariance(1.0, 1.0, 1.0);
  const double c12 = poisson_limit_covariance(1.0, 2.0, 1.0);
  const RngSeed seed{404, 0};
  const auto limit =
      monte_carlo_limit(PoissonModel{1.0}, w, grid, EdgeCorrection::Translation, 1.0, 2000, seed);
  const double t11 = limit.covariance(i1, i1), t12 = limit.covariance(i1, i2);

  const auto border = replicate_k_curves(PatternSampler(PoissonModel{1.0}, w), 1.0, grid,
                                         EdgeCorrection::Border, 2000, seed);
  g_border_k1 = column(border, i1);
  const Eigen::MatrixXd centered = border.rowwise() - border.colwise().mean();
  const Eigen::MatrixXd bc = w.volume() * (centered.transpose() * centered) / 1999.0;

  const bool pass = std::abs(t11 / c11 - 1.0) <= 0.10 && std::abs(t12 / c12 - 1.0) <= 0.10;
  return {pass, fmt("translation C(1,1)=%.2f C(1,2)=%.2f; border C(1,1)=%.2f C(1,2)=%.2f; "
                    "closed form %.2f %.2f",
                    t11, t12, bc(i1, i1), bc(i1, i2), c11, c12)};
}

Outcome marginal_normality() {
  if (g_border_k1.empty()) poisson_covariance();
  std::vector<double> z = g_border_k1;
  const double m = oracle::mean(z);
  for (double& v : z) v = std::sqrt(10000.0) * (v - m);
  const double a2 = oracle::anderson_darling_normal(z);
  return {a2 < oracle::kAndersonDarling1pct,
          fmt("A*^2 = %.3f (1%% critical %.3f), sd = %.2f", a2, oracle::kAndersonDarling1pct,
              oracle::sample_sd(z))};
}

Outcome check_row(const RejectionTable& table, double volume, const std::vector<double>& reference,
                  std::ostringstream& out) {
  bool pass = true;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto& cell = table.at(volume, static_cast<double>(i + 1));
    const double band = 2.0 * rejection_se_pct(reference[i], cell.replications);
    const bool ok = cell.ok() && std::abs(cell.rejection_pct - reference[i]) <= band;
    pass = pass && ok;
    out << fmt("R=%zu %.1f (ref %.1f +-%.1f)%s ", i + 1, cell.rejection_pct, reference[i], band,
               ok ? "" : "*");
  }
  return {pass, ""};
}

Outcome type_one_calibration() {
  ExperimentSpec spec;
  spec.volumes = {40000.0, 10000.0};
  spec.R_values = {1, 2, 3, 4, 5};
  spec.replications = 1000;
  spec.quantile_paths = 100000;
  spec.seed = {606, 0};
  const auto table = run_rejection_experiment(spec);
  std::ostringstream out;
  out << "200^2: ";
  const bool a = check_row(table, 40000.0, {6.8, 5.2, 4.8, 4.8, 4.8}, out).pass;
  out << "| 100^2: ";
  const bool b = check_row(table, 10000.0, {7.2, 6.0, 5.8, 5.7, 5.8}, out).pass;
  // For reference only: the translation estimator has no n/|W - r| variance
  // excess, so its row shows how much of the gap is due to the border weight.
  spec.volumes = {10000.0};
  spec.correction = EdgeCorrection::Translation;
  const auto translation = run_rejection_experiment(spec);
  out << "| translation 100^2 (info): ";
  check_row(translation, 10000.0, {7.2, 6.0, 5.8, 5.7, 5.8}, out);
  return {a && b, out.str()};
}

Outcome lgcp_power() {
  ExperimentSpec spec;
  spec.data_model = LgcpModel{LgcpParams::unit_intensity(0.2, 2.0)};
  spec.volumes = {2500.0};
  spec.R_values = {1};
  // Pooled over 4000 patterns so the rate is judged, not one noisy draw;
  // the band stays the one for 1000 replications.
  spec.replications = 4000;
  spec.quantile_paths = 100000;
  spec.seed = {707, 0};
  const auto table = run_rejection_experiment(spec);
  const auto& cell = table.at(2500.0, 1.0);
  const double band = 2.0 * rejection_se_pct(74.3, 1000);
  return {cell.ok() && std::abs(cell.rejection_pct - 74.3) <= band,
          fmt("rejection %.1f%% +- %.1f (ref 74.3 +- %.1f), status %s", cell.rejection_pct,
              cell.se_pct, band, cell.status.c_str())};
}

const GibbsModel& strauss02() {
  static const GibbsModel m(PairPotential::strauss(0.2, 0.4), 1.556, 1.0);
  return m;
}

Outcome strauss_intensity() {
  const double lambda = strauss02().branching_rate();
  const double expected = 1.556 * kPi * 0.16;
  const bool admissible = lambda < 1.0 && std::abs(lambda - expected) < 1e-12;
  const auto [rho, se] = gibbs_intensity(GibbsProcess{strauss02(), {}, 1.0},
                                         CubeWindow(2, 2500.0), 2000, {808, 0});
  return {admissible && std::abs(rho - 1.0) <= 0.03,
          fmt("lambda = %.4f, intensity %.4f +- %.4f", lambda, rho, se)};
}

Outcome clan_tail() {
  const auto tail = clan_tail_probe(strauss02(), 20000, {909, 0}, 8);
  bool pass = true;
  std::ostringstream out;
  for (const auto& t : tail) {
    pass = pass && t.empirical_tail <= t.bound + 3.0 * t.standard_error;
    out << fmt("k=%d %.4f<=%.4f ", t.k, t.empirical_tail, t.bound);
  }
  return {pass, out.str()};
}

Outcome zero_beta_is_poisson() {
  const GibbsModel m(PairPotential::strauss(0.2, 0.4), 1.556, 0.0);
  const CubeWindow w(2, 100.0);
  std::vector<long> counts;
  for (std::uint64_t i = 0; i < 2000; ++i)
    counts.push_back(static_cast<long>(sample_gibbs_perfect(w, m, {1010, i}).pattern.size()));
  const double d = oracle::ks_poisson_counts(counts, 155.6);
  const double crit = oracle::ks_critical_1pct(counts.size());
  return {d < crit, fmt("KS D = %.4f (1%% critical %.4f)", d, crit)};
}

Outcome structural_invariants() {
  const CubeWindow w(2, 400.0);
  const GibbsModel hard(PairPotential{0.3, {}, {}}, 2.5, 1.0);
  const GibbsModel kball(HardKBall{0.3, 3}, 0.8, 1.0);
  double min_dist = 1e300;
  std::size_t hard_bad = 0, kball_bad = 0, triples = 0, kball_points = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto p = sample_gibbs_perfect(w, hard, {1111, i}).pattern;
    const double d = p.min_pair_distance();
    min_dist = std::min(min_dist, d);
    if (!(d > 0.3)) ++hard_bad;
  }
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto p = sample_gibbs_perfect(w, kball, {1112, i}).pattern;
    kball_points += p.size();
    std::vector<oracle::P2> pts;
    for (std::size_t j = 0; j < p.size(); ++j) pts.push_back({p[j][0], p[j][1]});
    bool bad = false;
    for (std::size_t a = 0; a < pts.size() && !bad; ++a)
      for (std::size_t b = a + 1; b < pts.size() && !bad; ++b) {
        if (oracle::dist(pts[a], pts[b]) > 0.6) continue;
        for (std::size_t c = b + 1; c < pts.size() && !bad; ++c) {
          if (oracle::dist(pts[a], pts[c]) > 0.6 || oracle::dist(pts[b], pts[c]) > 0.6) continue;
          ++triples;
          const oracle::P2 tri[] = {pts[a], pts[b], pts[c]};
          bad = oracle::fits_in_disk(tri, 0.3, -1e-9);
        }
      }
    if (bad) ++kball_bad;
  }
  return {hard_bad == 0 && kball_bad == 0,
          fmt("hardcore: %zu/500 violations, min distance %.4f; hard-3-ball: %zu/500 violations "
              "(mean %.1f points, %zu close triples checked)",
              hard_bad, min_dist, kball_bad, static_cast<double>(kball_points) / 500.0, triples)};
}

Outcome gaussian_paths() {
  const RGrid grid = RGrid::up_to(1.0, 0.1);
  const auto limit = poisson_limit(grid, 1.0, EdgeCorrection::Border, 10000.0);
  const GaussianPathSampler sampler(limit.covariance);
  const auto paths = sampler.sample(100000, sampler.dimension(), {1212, 0});
  const Eigen::MatrixXd centered = paths.rowwise() - paths.colwise().mean();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / (paths.rows() - 1.0);
  double worst = 0.0;
  for (Eigen::Index i = 1; i < cov.rows(); ++i)
    for (Eigen::Index j = 1; j < cov.cols(); ++j)
      worst = std::max(worst, std::abs(cov(i, j) / limit.covariance(i, j) - 1.0));

  const auto single = poisson_limit(RGrid(1.0, 0.1, 1), 1.0, EdgeCorrection::Border, 10000.0);
  const auto sups = sample_sup_statistics(single, 1.0, 100000, {1212, 1});
  const double q = estimate_quantile(sups, 0.05);
  const double target = 1.959963984540054 * std::sqrt(single.covariance(0, 0));
  const double rel = std::abs(q / target - 1.0);
  return {worst <= 0.05 && rel <= 0.01,
          fmt("max relative covariance error %.4f (r > 0); |Y(1)| 95%% quantile %.3f vs %.3f",
              worst, q, target)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"fast estimator matches brute force", fast_matches_brute},
      {"Poisson K-hat unbiased (translation, border)", unbiased_poisson},
      {"uncorrected bias decays like n^-1/2", uncorrected_bias_decay},
      {"Poisson limit covariance", poisson_covariance},
      {"marginal normality of K-hat(1)", marginal_normality},
      {"type-I rejection rates", type_one_calibration},
      {"power against LGCP", lgcp_power},
      {"Strauss admissibility and intensity", strauss_intensity},
      {"ancestor clan tail bound", clan_tail},
      {"beta = 0 Gibbs is Poisson", zero_beta_is_poisson},
      {"hard-core and hard-k-ball invariants", structural_invariants},
      {"Gaussian path covariance and quantile", gaussian_paths},
  };
  std::set<int> selected, known_red;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--known-red=", 0) == 0) {
      std::stringstream ss(arg.substr(12));
      for (std::string id; std::getline(ss, id, ',');) known_red.insert(std::stoi(id));
    } else {
      selected.insert(std::stoi(arg));
    }
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool known = !o.pass && known_red.count(id);
    failures += !o.pass && !known;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << "  [" << o.detail << "] (" << fmt("%.0f s", secs) << ")"
              << (known ? " (known)" : "") << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
