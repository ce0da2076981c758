// SPDX-License-Identifier: Apache-2.0
// Independent reference computations used by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace oracle {

inline double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double sample_sd(std::span<const double> x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline double standard_error(std::span<const double> x) {
  return sample_sd(x) / std::sqrt(static_cast<double>(x.size()));
}

/// Anderson-Darling A*^2 for normality with mean and variance estimated
/// from the sample (Stephens' small-sample factor 1 + 0.75/n + 2.25/n^2).
inline double anderson_darling_normal(std::vector<double> x) {
  const double m = mean(x), s = sample_sd(x);
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  const boost::math::normal_distribution<double> z;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lo = boost::math::cdf(z, (x[i] - m) / s);
    const double hi = boost::math::cdf(z, (x[x.size() - 1 - i] - m) / s);
    sum += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log1p(-hi));
  }
  const double a2 = -n - sum / n;
  return a2 * (1.0 + 0.75 / n + 2.25 / (n * n));
}

/// 1% critical value of A*^2 in the estimated-parameter case.
inline constexpr double kAndersonDarling1pct = 1.035;

/// Kolmogorov-Smirnov distance between the empirical law of integer counts
/// and Poisson(mean), evaluated at every integer support point.
inline double ks_poisson_counts(std::vector<long> counts, double poisson_mean) {
  std::sort(counts.begin(), counts.end());
  const boost::math::poisson_distribution<double> law(poisson_mean);
  const auto n = static_cast<double>(counts.size());
  double d = 0.0;
  const long hi = counts.back() + 1;
  const long lo = std::max(0L, counts.front() - 1);
  for (long k = lo; k <= hi; ++k) {
    const auto below = std::upper_bound(counts.begin(), counts.end(), k) - counts.begin();
    d = std::max(d, std::abs(static_cast<double>(below) / n - boost::math::cdf(law, static_cast<double>(k))));
  }
  return d;
}

/// Asymptotic 1% KS critical value for sample size n; conservative for
/// discrete laws.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

/// Two-sample Kolmogorov-Smirnov distance.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline double ks_two_sample_critical_1pct(std::size_t n, std::size_t m) {
  const auto a = static_cast<double>(n), b = static_cast<double>(m);
  return 1.6276 * std::sqrt((a + b) / (a * b));
}

using P2 = std::array<double, 2>;

inline double dist(const P2& a, const P2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

/// True when the points fit in a closed disk of radius R. The intersection
/// of the disks B(p, R) is convex and, if nonempty, its lowest point is
/// either the bottom of one disk or a crossing of two circles; every
/// candidate of that form is tried.
inline bool fits_in_disk(std::span<const P2> pts, double R, double tol = 1e-9) {
  auto covers = [&](const P2& c) {
    for (const auto& p : pts)
      if (dist(c, p) > R * (1.0 + tol)) return false;
    return true;
  };
  for (const auto& p : pts)
    if (covers({p[0], p[1] - R})) return true;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = dist(pts[i], pts[j]);
      if (d > 2.0 * R * (1.0 + tol) || d == 0.0) continue;
      const double h = std::sqrt(std::max(0.0, R * R - 0.25 * d * d));
      const P2 mid{0.5 * (pts[i][0] + pts[j][0]), 0.5 * (pts[i][1] + pts[j][1])};
      const double ux = (pts[j][0] - pts[i][0]) / d, uy = (pts[j][1] - pts[i][1]) / d;
      if (covers({mid[0] - h * uy, mid[1] + h * ux}) || covers({mid[0] + h * uy, mid[1] - h * ux}))
        return true;
    }
  return pts.size() <= 1;
}

}  // namespace oracle
