// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ripley/error.hpp"
#include "ripley/geometry.hpp"
#include "ripley/pattern_io.hpp"

using namespace ripley;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(CubeWindow, SideMatchesVolume) {
  for (int d = 1; d <= 4; ++d) {
    const CubeWindow w(d, 2500.0);
    EXPECT_NEAR(std::pow(w.side(), d), 2500.0, 2500.0 * 1e-12) << "d=" << d;
  }
  EXPECT_DOUBLE_EQ(CubeWindow(2, 100.0).side(), 10.0);
  EXPECT_THROW(CubeWindow(2, 0.0), InvalidArgument);
  EXPECT_THROW(CubeWindow(0, 1.0), InvalidArgument);
}

TEST(PointPattern, RejectsOutsideAndDuplicates) {
  const CubeWindow w(2, 100.0);
  EXPECT_NO_THROW(PointPattern(w, {5.0, -5.0, 0.0, 0.0}));  // closed window
  EXPECT_THROW(PointPattern(w, {5.1, 0.0}), InvalidArgument);
  EXPECT_THROW(PointPattern(w, {1.0, 1.0, 1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(PointPattern(w, {1.0, 1.0, 1.0 + 1e-13, 1.0}), InvalidArgument);
  EXPECT_NO_THROW(PointPattern(w, {1.0, 1.0, 1.0 + 1e-9, 1.0}));
  EXPECT_THROW(PointPattern(w, {1.0, 1.0, 2.0}), InvalidArgument);
}

TEST(OverlapVolume, Examples) {
  const CubeWindow w(2, 100.0);
  const double zero[] = {0.0, 0.0}, one[] = {1.0, 0.0}, side[] = {10.0, 0.0};
  EXPECT_DOUBLE_EQ(overlap_volume(w, zero), 100.0);
  EXPECT_DOUBLE_EQ(overlap_volume(w, one), 90.0);
  EXPECT_DOUBLE_EQ(overlap_volume(w, side), 0.0);
}

TEST(OverlapVolume, SymmetricAndMonotone) {
  const CubeWindow w(3, 1000.0);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (int i = 0; i < 500; ++i) {
    double v[3] = {u(gen), u(gen), u(gen)};
    const double neg[3] = {-v[0], -v[1], -v[2]};
    const double a = overlap_volume(w, v);
    EXPECT_DOUBLE_EQ(a, overlap_volume(w, neg));
    v[i % 3] *= 1.1;
    EXPECT_LE(overlap_volume(w, v), a + 1e-12);
  }
}

TEST(ErodedVolume, Examples) {
  const CubeWindow w(2, 100.0);
  EXPECT_DOUBLE_EQ(eroded_volume(w, 0.0), 100.0);
  EXPECT_DOUBLE_EQ(eroded_volume(w, 1.0), 64.0);
  EXPECT_DOUBLE_EQ(eroded_volume(w, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(eroded_volume(w, 7.0), 0.0);
}

TEST(ErodedVolume, BelowOverlapForShortShifts) {
  const CubeWindow w(2, 400.0);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> s_dist(0.0, 6.0), unit(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double s = s_dist(gen);
    const double v[2] = {2.0 * s * unit(gen), 2.0 * s * unit(gen)};
    EXPECT_LE(eroded_volume(w, s), overlap_volume(w, v) + 1e-12);
  }
}

TEST(ArcFraction, Examples) {
  const CubeWindow w(2, 100.0);
  const double origin[] = {0.0, 0.0}, near_edge[] = {4.5, 0.0};
  EXPECT_DOUBLE_EQ(arc_fraction_inside(w, origin, 1.0), 1.0);
  EXPECT_NEAR(arc_fraction_inside(w, near_edge, 1.0), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(arc_fraction_inside(w, origin, 0.001), 1.0);
}

TEST(ArcFraction, CornerQuarterAndErrors) {
  const CubeWindow w(2, 100.0);
  const double corner[] = {5.0, 5.0}, outside[] = {6.0, 0.0};
  EXPECT_NEAR(arc_fraction_inside(w, corner, 1.0), 0.25, 1e-12);
  EXPECT_THROW(arc_fraction_inside(w, outside, 1.0), InvalidArgument);
  EXPECT_THROW(arc_fraction_inside(CubeWindow(3, 1000.0), std::vector<double>{0, 0, 0}, 1.0),
               InvalidArgument);
}

TEST(ArcFraction, MatchesDenseAngularSampling) {
  // Count inside points on a fine polygon of the circle.
  const CubeWindow w(2, 100.0);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0), r_dist(0.1, 6.0);
  for (int i = 0; i < 200; ++i) {
    const double c[2] = {u(gen), u(gen)};
    const double r = r_dist(gen);
    const int m = 200000;
    int inside = 0;
    for (int k = 0; k < m; ++k) {
      const double th = 2.0 * kPi * (k + 0.5) / m;
      const double p[2] = {c[0] + r * std::cos(th), c[1] + r * std::sin(th)};
      inside += w.contains(p);
    }
    EXPECT_NEAR(arc_fraction_inside(w, c, r), static_cast<double>(inside) / m, 1e-4);
  }
}

TEST(RotationAveragedOverlap, MatchesAnalyticIntegral) {
  const CubeWindow w(2, 100.0);
  const double L = 10.0;
  for (double t : {0.5, 1.0, 3.0, 7.5}) {
    const double exact = L * L - 4.0 * L * t / kPi + t * t / kPi;
    EXPECT_NEAR(rotation_averaged_overlap(w, t), exact, 1e-9 * exact) << "t=" << t;
  }
  EXPECT_NEAR(rotation_averaged_overlap(w, 1.0), 87.58591444, 1e-7);
  EXPECT_THROW(rotation_averaged_overlap(w, 1.0, 722), InvalidArgument);
}

TEST(RotationAveragedOverlap, LimitsAndConvergence) {
  const CubeWindow w(2, 100.0);
  EXPECT_NEAR(rotation_averaged_overlap(w, 1e-9), 100.0, 1e-6);
  for (double t : {0.3, 2.0, 9.0}) {
    const double a = rotation_averaged_overlap(w, t, 720), b = rotation_averaged_overlap(w, t, 1440);
    EXPECT_NEAR(a, b, 1e-6 * b);
  }
  double prev = 100.0;
  for (double t = 0.1; t < 10.0; t += 0.1) {
    const double v = rotation_averaged_overlap(w, t);
    EXPECT_LE(v, prev + 1e-12);
    prev = v;
  }
  EXPECT_THROW(rotation_averaged_overlap(w, 10.0), InvalidArgument);
}

TEST(EdgeCorrectionNames, RoundTripAndDimensionCheck) {
  for (auto c : {EdgeCorrection::None, EdgeCorrection::Translation, EdgeCorrection::RigidMotion,
                 EdgeCorrection::Border, EdgeCorrection::Isotropic})
    EXPECT_EQ(parse_edge_correction(to_string(c)), c);
  EXPECT_EQ(parse_edge_correction("ripley"), EdgeCorrection::Isotropic);
  EXPECT_THROW(parse_edge_correction("ohser"), InvalidArgument);
  EXPECT_THROW(check_supported(EdgeCorrection::Isotropic, CubeWindow(3, 8.0)), InvalidArgument);
  EXPECT_THROW(check_supported(EdgeCorrection::RigidMotion, CubeWindow(1, 8.0)), InvalidArgument);
  EXPECT_NO_THROW(check_supported(EdgeCorrection::Border, CubeWindow(3, 8.0)));
}

TEST(UnitBall, Volumes) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
  EXPECT_NEAR(unit_ball_volume(2), kPi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * kPi / 3.0, 1e-14);
}

TEST(PatternCsv, RoundTrip) {
  const CubeWindow w(2, 100.0);
  const PointPattern p(w, {0.1, -2.5, 4.99, 3.0, -5.0, 5.0});
  std::stringstream io;
  write_pattern_csv(io, p);
  EXPECT_EQ(io.str().substr(0, 12), "# d=2 n=100\n");
  const auto q = read_pattern_csv(io);
  ASSERT_EQ(q.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int a = 0; a < 2; ++a) EXPECT_EQ(q[i][a], p[i][a]);
}

TEST(PatternCsv, TranslatesToCenteredWindow) {
  std::stringstream io("# d=2 n=100 lower=0,0\n1,1\n9.5,2\n");
  const auto p = read_pattern_csv(io);
  EXPECT_DOUBLE_EQ(p[0][0], -4.0);
  EXPECT_DOUBLE_EQ(p[1][0], 4.5);
  EXPECT_DOUBLE_EQ(p[1][1], -3.0);
}

TEST(PatternCsv, MalformedInput) {
  std::stringstream missing("1,2\n");
  EXPECT_THROW(read_pattern_csv(missing), RuntimeError);
  std::stringstream wrong_arity("# d=2 n=100\n1,2,3\n");
  EXPECT_THROW(read_pattern_csv(wrong_arity), RuntimeError);
}
