// SPDX-License-Identifier: Apache-2.0
#include "ripley/limit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ripley/error.hpp"

namespace ripley {

void LimitModel::validate() const {
  const auto g = static_cast<Eigen::Index>(grid.size());
  require(mean_curve.size() == grid.size(), "limit mean curve does not match its grid");
  require(covariance.rows() == g && covariance.cols() == g,
          "limit covariance does not match its grid");
  require(volume > 0.0 && rho > 0.0, "limit needs positive volume and intensity");
  const double scale = std::max(covariance.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) throw InvalidArgument("limit covariance is not symmetric");
  const double trace = covariance.trace();
  if (trace <= 0.0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  if (smallest < -1e-8 * trace / static_cast<double>(g)) {
    std::ostringstream msg;
    msg << "limit covariance is not positive semidefinite (smallest eigenvalue " << smallest
        << ", trace " << trace << ")";
    throw InvalidArgument(msg.str());
  }
}

double poisson_limit_covariance(double r1, double r2, double rho, int dimension) {
  if (dimension != 2) throw InvalidArgument("closed-form Poisson covariance is planar only");
  require(r1 >= 0.0 && r2 >= 0.0, "radii must be >= 0");
  require(rho > 0.0, "intensity must be positive");
  constexpr double pi = std::numbers::pi;
  const double m = std::min(r1, r2);
  return 2.0 * pi * m * m / (rho * rho) + 4.0 * pi * pi * r1 * r1 * r2 * r2 / rho;
}

LimitModel poisson_limit(const RGrid& grid, double rho, EdgeCorrection correction, double volume) {
  require(correction != EdgeCorrection::None,
          "the uncorrected estimator is biased; use a simulated limit");
  require(volume > 0.0, "window volume must be positive");
  const auto g = static_cast<Eigen::Index>(grid.size());
  LimitModel limit{grid, {}, Eigen::MatrixXd(g, g), correction, rho, volume,
                   {"closed_form_poisson", 0, "poisson rho=" + std::to_string(rho)}};
  limit.mean_curve.resize(grid.size());
  for (Eigen::Index i = 0; i < g; ++i) {
    const double r = grid[static_cast<std::size_t>(i)];
    limit.mean_curve[static_cast<std::size_t>(i)] = std::numbers::pi * r * r;
    for (Eigen::Index j = 0; j < g; ++j)
      limit.covariance(i, j) = poisson_limit_covariance(r, grid[static_cast<std::size_t>(j)], rho);
  }
  return limit;
}

Eigen::MatrixXd replicate_k_curves(const PatternSampler& sampler, double rho, const RGrid& grid,
                                   EdgeCorrection correction, std::size_t replications,
                                   RngSeed seed) {
  const auto m = static_cast<Eigen::Index>(replications);
  Eigen::MatrixXd curves(m, static_cast<Eigen::Index>(grid.size()));
  std::string error;
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < m; ++i) {
    try {
      const auto pattern = sampler.sample(seed.substream(static_cast<std::uint64_t>(i)));
      const auto curve = estimate_k(pattern, rho, grid, correction);
      for (std::size_t j = 0; j < grid.size(); ++j)
        curves(i, static_cast<Eigen::Index>(j)) = curve.values[j];
    } catch (const std::exception& e) {
#pragma omp critical(ripley_replicate_error)
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw RuntimeError("replication failed: " + error);
  return curves;
}

LimitModel monte_carlo_limit(const ModelSpec& model, const CubeWindow& window, const RGrid& grid,
                             EdgeCorrection correction, double rho, std::size_t replications,
                             RngSeed seed) {
  if (replications < kMinLimitReplications)
    throw InvalidArgument("monte carlo limit needs at least " +
                          std::to_string(kMinLimitReplications) + " replications");
  check_supported(correction, window);
  const PatternSampler sampler(model, window);
  const Eigen::MatrixXd curves =
      replicate_k_curves(sampler, rho, grid, correction, replications, seed);
  const Eigen::RowVectorXd mean = curves.colwise().mean();
  const Eigen::MatrixXd centered = curves.rowwise() - mean;
  const double m = static_cast<double>(replications);
  Eigen::MatrixXd cov = window.volume() * (centered.transpose() * centered) / (m - 1.0);
  cov = 0.5 * (cov + cov.transpose()).eval();

  LimitModel limit{grid, std::vector<double>(mean.data(), mean.data() + mean.size()), cov,
                   correction, rho, window.volume(),
                   {"monte_carlo", replications, describe(model)}};
  return limit;
}

GaussianPathSampler::GaussianPathSampler(const Eigen::MatrixXd& covariance) {
  const Eigen::Index g = covariance.rows();
  require(g > 0 && covariance.cols() == g, "covariance must be a nonempty square matrix");
  const double trace = covariance.trace();
  if (trace == 0.0 && covariance.cwiseAbs().maxCoeff() == 0.0) {
    factor_ = Eigen::MatrixXd::Zero(g, g);
    return;
  }
  require(trace > 0.0, "covariance trace must be positive");
  const double unit = trace / static_cast<double>(g);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(g, g);
  for (double eps = 1e-10 * unit; eps <= 1e-6 * unit * (1.0 + 1e-12); eps *= 2.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(covariance + eps * identity);
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
      jitter_ = eps;
      return;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance, Eigen::EigenvaluesOnly);
  std::ostringstream msg;
  msg << "covariance factorization failed at maximum jitter " << 1e-6 * unit
      << "; eigenvalues range from " << eig.eigenvalues().minCoeff() << " to "
      << eig.eigenvalues().maxCoeff();
  throw RuntimeError(msg.str());
}

namespace {

constexpr std::size_t kPathBlock = 1024;

// Applies `reduce` to each simulated path (a column of the leading block).
template <class Reduce>
std::vector<double> reduce_paths(const GaussianPathSampler& sampler, Eigen::Index leading,
                                 std::size_t count, RngSeed seed, Reduce reduce) {
  std::vector<double> out(count);
  const std::size_t blocks = (count + kPathBlock - 1) / kPathBlock;
  const Eigen::MatrixXd lead = sampler.factor().topLeftCorner(leading, leading);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t first = b * kPathBlock;
    const auto cols = static_cast<Eigen::Index>(std::min(kPathBlock, count - first));
    Engine gen = make_engine(seed.substream(b));
    std::normal_distribution<double> normal;
    Eigen::MatrixXd z(leading, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < leading; ++r) z(r, c) = normal(gen);
    const Eigen::MatrixXd y = lead.triangularView<Eigen::Lower>() * z;
    for (Eigen::Index c = 0; c < cols; ++c)
      out[first + static_cast<std::size_t>(c)] = reduce(y.col(c));
  }
  return out;
}

Eigen::Index leading_count(const LimitModel& limit, double R) {
  require(R > 0.0, "R must be positive");
  require(R <= limit.grid.back() + 1e-9 * limit.grid.step(), "limit grid does not cover [0, R]");
  return static_cast<Eigen::Index>(limit.grid.count_up_to(R));
}

}  // namespace

Eigen::MatrixXd GaussianPathSampler::sample(std::size_t count, Eigen::Index leading,
                                            RngSeed seed) const {
  require(leading >= 1 && leading <= dimension(), "leading block out of range");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), leading);
  const std::size_t blocks = (count + kPathBlock - 1) / kPathBlock;
  const Eigen::MatrixXd lead = factor_.topLeftCorner(leading, leading);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t first = b * kPathBlock;
    const auto cols = static_cast<Eigen::Index>(std::min(kPathBlock, count - first));
    Engine gen = make_engine(seed.substream(b));
    std::normal_distribution<double> normal;
    Eigen::MatrixXd z(leading, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < leading; ++r) z(r, c) = normal(gen);
    out.middleRows(static_cast<Eigen::Index>(first), cols) =
        (lead.triangularView<Eigen::Lower>() * z).transpose();
  }
  return out;
}

std::string_view to_string(StatisticKind kind) {
  return kind == StatisticKind::Sup ? "sup" : "integral";
}

StatisticKind parse_statistic_kind(std::string_view name) {
  if (name == "sup" || name == "ks") return StatisticKind::Sup;
  if (name == "integral" || name == "int") return StatisticKind::Integral;
  throw InvalidArgument("unknown test statistic '" + std::string(name) + "'");
}

double trapezoid_abs(std::span<const double> values, std::size_t count, double step) {
  require(count <= values.size(), "trapezoid range exceeds the curve");
  if (count < 2) return 0.0;
  double sum = 0.5 * (std::abs(values[0]) + std::abs(values[count - 1]));
  for (std::size_t i = 1; i + 1 < count; ++i) sum += std::abs(values[i]);
  return sum * step;
}

std::vector<double> sample_sup_statistics(const LimitModel& limit, double R, std::size_t paths,
                                          RngSeed seed) {
  const Eigen::Index m = leading_count(limit, R);
  const GaussianPathSampler sampler(limit.covariance.topLeftCorner(m, m));
  return reduce_paths(sampler, m, paths, seed,
                      [](const auto& y) { return y.cwiseAbs().maxCoeff(); });
}

std::vector<double> sample_integral_statistics(const LimitModel& limit, double R,
                                               std::size_t paths, RngSeed seed) {
  const Eigen::Index m = leading_count(limit, R);
  const GaussianPathSampler sampler(limit.covariance.topLeftCorner(m, m));
  const double step = limit.grid.step();
  return reduce_paths(sampler, m, paths, seed, [m, step](const auto& y) {
    const Eigen::VectorXd v = y;
    return trapezoid_abs({v.data(), static_cast<std::size_t>(m)}, static_cast<std::size_t>(m),
                         step);
  });
}

double estimate_quantile(std::span<const double> samples, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  if (samples.size() < kMinQuantileSamples)
    throw InvalidArgument("quantile estimation needs at least " +
                          std::to_string(kMinQuantileSamples) + " samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = static_cast<double>(sorted.size() - 1) * (1.0 - alpha);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

std::vector<double> scaled_deviation(const CurveEstimate& curve, std::span<const double> mean,
                                     double R, std::size_t& count) {
  if (mean.size() != curve.values.size())
    throw InvalidArgument("curve and mean curve are on different grids");
  require(R >= 0.0, "R must be >= 0");
  count = curve.grid.count_up_to(R);
  const double root_n = std::sqrt(curve.volume);
  std::vector<double> dev(count);
  for (std::size_t i = 0; i < count; ++i) dev[i] = root_n * (curve.values[i] - mean[i]);
  return dev;
}

}  // namespace

double ks_statistic(const CurveEstimate& curve, std::span<const double> mean_curve, double R) {
  std::size_t count = 0;
  const auto dev = scaled_deviation(curve, mean_curve, R, count);
  double best = 0.0;
  for (double v : dev) best = std::max(best, std::abs(v));
  return best;
}

double integral_statistic(const CurveEstimate& curve, std::span<const double> mean_curve, double R) {
  std::size_t count = 0;
  const auto dev = scaled_deviation(curve, mean_curve, R, count);
  return trapezoid_abs(dev, count, curve.grid.step());
}

GofCalibration::GofCalibration(const LimitModel& limit, double R, double alpha, StatisticKind kind,
                               std::size_t paths, RngSeed seed)
    : mean_(limit.mean_curve), grid_(limit.grid), R_(R), alpha_(alpha), kind_(kind) {
  const auto draws = kind == StatisticKind::Sup ? sample_sup_statistics(limit, R, paths, seed)
                                                : sample_integral_statistics(limit, R, paths, seed);
  quantile_ = estimate_quantile(draws, alpha);
}

double GofCalibration::statistic(const CurveEstimate& curve) const {
  if (!(curve.grid == grid_)) throw InvalidArgument("curve grid differs from the limit grid");
  return kind_ == StatisticKind::Sup ? ks_statistic(curve, mean_, R_)
                                     : integral_statistic(curve, mean_, R_);
}

GofResult GofCalibration::test(const CurveEstimate& curve) const {
  const double s = statistic(curve);
  return {s, quantile_, alpha_, s > quantile_, R_, kind_};
}

GofResult gof_test(const PointPattern& pattern, const LimitModel& limit, double alpha, double R,
                   StatisticKind kind, EdgeCorrection correction, double rho, std::size_t paths,
                   RngSeed seed) {
  require(correction == limit.correction, "edge correction differs from the limit's");
  require(std::abs(pattern.window().volume() - limit.volume) <= 1e-9 * limit.volume,
          "pattern window differs from the limit's window volume");
  const GofCalibration calibration(limit, R, alpha, kind, paths, seed);
  return calibration.test(estimate_k(pattern, rho, limit.grid, correction));
}

}  // namespace ripley
