#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tubelab/covering.hpp"
#include "tubelab/generators.hpp"
#include "tubelab/kernels.hpp"
#include "tubelab/projections.hpp"

using namespace tubelab;

namespace {

PointSet segment(int k) {
  std::vector<GridPoint> pts;
  for (std::int64_t i = 0; i < (std::int64_t{1} << k); ++i) pts.push_back({i, 0});
  return PointSet::from_grid(Scale(k), pts);
}

}  // namespace

TEST(Project, AxisExamples) {
  const auto K = PointSet::from_grid(Scale(3), {{1, 0}, {5, 0}, {-2, 0}});
  const auto e0 = project(K, 0.0);
  EXPECT_DOUBLE_EQ(e0[0], 0.125);
  EXPECT_DOUBLE_EQ(e0[1], 0.625);
  EXPECT_DOUBLE_EQ(e0[2], -0.25);
  for (double v : project(K, std::numbers::pi / 2)) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Project, DiagonalCountMatchesDedupe) {
  const auto G = full_grid(5);
  const double e = std::numbers::pi / 4;
  const auto vals = project(G, e);
  std::set<std::int64_t> cells;
  for (double v : vals) {
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, std::sqrt(2.0));
    cells.insert(kernels::float_cell(v, 1.0 / 32));
  }
  const std::vector<double> one{e};
  const auto sw = sweep(G, {Scale(5), one, {}}, Scale(5));
  EXPECT_EQ(sw.counts[0], cells.size());
}

TEST(Sweep, SegmentFollowsCosine) {
  const int k = 8;
  const auto K = segment(k);
  std::vector<double> angles;
  for (int i = 0; i < 8; ++i) angles.push_back(std::numbers::pi * i / 8);
  const auto sw = sweep(K, {Scale(k), angles, {}}, Scale(k));
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double want = 255.0 * std::abs(std::cos(angles[i])) + 1.0;
    EXPECT_NEAR(static_cast<double>(sw.counts[i]), want, 2.0) << angles[i];
  }
  const auto normal = std::vector<double>{std::numbers::pi / 2};
  EXPECT_EQ(sweep(K, {Scale(k), normal, {}}, Scale(k)).counts[0], 1u);
}

TEST(Sweep, SinglePoint) {
  const auto K = PointSet::from_grid(Scale(6), {{5, 9}});
  const auto sw = sweep(K, uniform_net(Scale(6)), Scale(6));
  for (auto c : sw.counts) EXPECT_EQ(c, 1u);
  const auto sum = summarize(sw);
  EXPECT_EQ(sum.min, 1u);
  EXPECT_EQ(sum.max, 1u);
}

TEST(Sweep, CountsBoundedByCellsAndSize) {
  const auto K = cantor_grid(8, 0.6);
  const auto net = uniform_net(Scale(5));
  for (int target : {4, 6, 8}) {
    const auto sw = sweep(K, net, Scale(target));
    const auto cells = covering_number(K, Scale(target));
    for (auto c : sw.counts) {
      EXPECT_GE(c, 1u);
      EXPECT_LE(c, std::min<std::uint64_t>(K.size(), 3 * cells));
    }
  }
}

TEST(Sweep, RightAngleRotationCovariance) {
  oracle::SplitMix rng{3};
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  std::vector<GridPoint> pts, rotated;
  while (pts.size() < 300) {
    const auto x = rng.range(-256, 256), y = rng.range(-256, 256);
    if (!seen.insert({x, y}).second) continue;
    pts.push_back({x, y});
    rotated.push_back({-y, x});
  }
  const auto K = PointSet::from_grid(Scale(8), pts), R = PointSet::from_grid(Scale(8), rotated);
  std::vector<double> a, b;
  for (int i = 0; i < 50; ++i) {
    const double e = (std::numbers::pi / 2) * i / 50.0 + 0.001;
    a.push_back(e);
    b.push_back(e + std::numbers::pi / 2);
  }
  EXPECT_EQ(sweep(K, {Scale(6), a, {}}, Scale(6)).counts, sweep(R, {Scale(6), b, {}}, Scale(6)).counts);
}

TEST(Sweep, Errors) {
  const auto K = full_grid(2);
  EXPECT_THROW(sweep(K, {Scale(2), {}, {}}, Scale(2)), PreconditionError);
}

TEST(Summary, NearestRank) {
  ProjectionSweep sw;
  sw.counts = {5, 1, 4, 2, 3};
  const auto s = summarize(sw);
  EXPECT_EQ(s.min, 1u);
  EXPECT_EQ(s.q25, 2u);
  EXPECT_EQ(s.median, 3u);
  EXPECT_EQ(s.q75, 4u);
  EXPECT_EQ(s.max, 5u);
}

TEST(Exceptional, SegmentAtSmallThreshold) {
  const int k = 8;
  const auto sw = sweep(segment(k), uniform_net(Scale(k)), Scale(k));
  const auto ex = exceptional_set(sw, 0.1);
  EXPECT_GE(ex.angles.size(), 1u);
  EXPECT_LE(ex.angles.size(), 8u);
  for (double e : ex.angles) EXPECT_NEAR(e, std::numbers::pi / 2, std::pow(2.0, -k * 0.9) * 2);
}

TEST(Exceptional, FullThresholdOnOneDimensionalSet) {
  const auto sw = sweep(segment(8), uniform_net(Scale(8)), Scale(8));
  EXPECT_EQ(exceptional_set(sw, 1.0).angles.size(), sw.angles.size());
}

TEST(Exceptional, SpreadSetAtTinyThreshold) {
  const auto sw = sweep(full_grid(6), uniform_net(Scale(6)), Scale(6));
  EXPECT_TRUE(exceptional_set(sw, 1e-3).angles.empty());
  EXPECT_THROW(exceptional_set(sw, 0.0), PreconditionError);
  EXPECT_THROW(exceptional_set(sw, 1.5), PreconditionError);
}

TEST(Exceptional, AntitoneInThreshold) {
  const auto sw = sweep(cantor_grid(8, 0.5), uniform_net(Scale(8)), Scale(8));
  std::vector<double> prev;
  for (double t = 0.05; t <= 1.0; t += 0.05) {
    const auto cur = exceptional_set(sw, t).angles;
    for (double e : prev) EXPECT_NE(std::find(cur.begin(), cur.end(), e), cur.end());
    prev = cur;
  }
}

TEST(Kaufman, ConstantFormula) {
  const double l = 10 * std::log(2.0);
  EXPECT_NEAR(kaufman_constant(100, Scale(10), 0.6), 100.0 / (l * l * std::pow(2.0, 6.0)), 1e-12);
}

TEST(Nets, UniformAndFromValues) {
  const auto net = uniform_net(Scale(3));
  EXPECT_EQ(net.angles.size(), 26u);  // j / 8 < pi
  // a closed ball of radius r holds 2r / delta + 1 angles
  EXPECT_TRUE(validate_net(net, 1.0, 3.0).valid);
  EXPECT_FALSE(validate_net(net, 1.0, 2.0).valid);
  const auto C = cantor_line(8, 0.5);
  const auto n2 = net_from_values(C, std::numbers::pi);
  EXPECT_EQ(n2.angles.size(), C.size());
  EXPECT_TRUE(validate_net(n2, 0.5, 16.0).valid);
  DirectionNet close{Scale(4), {0.0, 0.01}, {}};
  EXPECT_THROW(validate_net(close, 1.0, 1.0), PreconditionError);
}

TEST(Nets, SlopeAngleRoundTrip) {
  for (double a : {-3.0, -0.5, 0.0, 0.25, 2.0}) EXPECT_NEAR(slope_of_angle(angle_of_slope(a)), a, 1e-12);
}

TEST(Energy, ClosedFormOnAxis) {
  const auto K = segment(6);
  const std::vector<double> normal{std::numbers::pi / 2};
  const auto en = projection_energy(K, {Scale(6), normal, {}}, 0.5);
  EXPECT_NEAR(en.energy[0], 8.0 * (1.0 - 1.0 / 64.0), 1e-9);
}

TEST(Energy, CoincidentProjectionIsTruncated) {
  const auto K = PointSet::from_grid(Scale(4), {{0, 0}, {0, 8}});
  const std::vector<double> e{0.0};
  const auto en = projection_energy(K, {Scale(4), e, {}}, 1.0);
  EXPECT_DOUBLE_EQ(en.energy[0], 16.0 * 2.0 / 4.0);
  EXPECT_THROW(projection_energy(PointSet::from_grid(Scale(4), {{0, 0}}), {Scale(4), e, {}}, 1.0), PreconditionError);
}

TEST(Energy, AverageMatchesMean) {
  const auto P = cantor_grid(6, 0.5);
  const auto net = uniform_net(Scale(4));
  const auto en = projection_energy(P, net, 0.5);
  double m = 0.0;
  for (double v : en.energy) m += v;
  EXPECT_NEAR(en.average, m / en.energy.size(), 1e-12 * en.average);
}

TEST(Energy, SmallProjectionsHaveLargeEnergy) {
  const auto P = cantor_grid(8, 0.5);
  const auto net = uniform_net(Scale(6));
  const auto sw = sweep(P, net, Scale(8));
  const auto en = projection_energy(P, net, 0.5);
  std::vector<double> counts(sw.counts.begin(), sw.counts.end());
  EXPECT_LT(spearman(counts, en.energy), 0.0);
}

TEST(Spearman, Examples) {
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0, 1e-12);
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-12);
  EXPECT_NEAR(spearman({1, 1, 2}, {1, 1, 2}), 1.0, 1e-12);
  EXPECT_THROW(spearman({1}, {1}), PreconditionError);
}

TEST(Audit, JitterMovesFewDirections) {
  const auto K = cantor_grid(8, 0.5);
  const auto audit = boundary_audit(K, uniform_net(Scale(6)), Scale(6), 0x1p-28);
  EXPECT_LE(audit.max_difference, K.size());
}
