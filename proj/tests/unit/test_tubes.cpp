#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tubelab/tubes.hpp"

using namespace tubelab;

namespace {

DyadicRational q(std::int64_t n, int e) { return DyadicRational(n, e); }

DyadicRational random_dyadic(oracle::SplitMix& rng, int e, std::int64_t bound) {
  return DyadicRational(rng.range(-bound, bound), e);
}

// A point of T drawn from its parameter square: (a', b') inside the square, x random.
DyadicPoint random_point_in(oracle::SplitMix& rng, const DyadicTube& T, int extra) {
  const int e = T.scale.k + extra;
  const auto ap = DyadicRational(T.a * (std::int64_t{1} << extra) + rng.range(0, (1 << extra) - 1), e);
  const auto bp = DyadicRational(T.b * (std::int64_t{1} << extra) + rng.range(0, (1 << extra) - 1), e);
  const auto x = DyadicRational(rng.range(-64, 64), 6);
  return {x, ap * x + bp};
}

}  // namespace

TEST(Duality, Examples) {
  EXPECT_EQ(dual_line({q(0, 0), q(0, 0)}).slope, q(0, 0));
  const auto l = dual_line({q(1, 0), q(1, 0)});
  EXPECT_TRUE(l.contains({q(2, 0), q(3, 0)}));
  const auto m = dual_line({q(1, 1), q(-1, 2)});
  EXPECT_TRUE(m.contains({q(1, 0), q(1, 2)}));
  const auto T = DyadicTube::from_params(Scale(2), q(-1, 0), q(1, 2));
  EXPECT_TRUE(tube_contains(T, {q(1, 1), q(-1, 2)}));
}

TEST(Duality, InvolutionProperty) {
  oracle::SplitMix rng{21};
  for (int i = 0; i < 2000; ++i) {
    const int k = static_cast<int>(rng.range(0, 12));
    const auto a = random_dyadic(rng, 6, 64), c = DyadicRational(rng.range(-(1 << k), 1 << k), k);
    const auto b = random_dyadic(rng, 6, 64);
    const auto d = a * c + b;
    if (!d.on_grid(k) || d.abs() > q(4, 0)) continue;
    EXPECT_TRUE(dual_line({-c, d}).contains({a, b}));
    const auto T = DyadicTube::from_params(Scale(k), -c, d);
    EXPECT_TRUE(tube_contains(T, {a, b}));
  }
}

TEST(TubeContains, Examples) {
  const auto T = DyadicTube::from_params(Scale(2), q(0, 0), q(0, 0));
  EXPECT_TRUE(tube_contains(T, {q(1, 1), q(1, 3)}));
  EXPECT_FALSE(tube_contains(T, {q(0, 0), q(1, 2)}));
  EXPECT_TRUE(tube_contains(T, {q(0, 0), q(3, 4)}));
  EXPECT_TRUE(tube_contains(T, {q(0, 0), q(0, 0)}));
}

TEST(TubeContains, AgreesWithRationalOracle) {
  oracle::SplitMix rng{5};
  for (int i = 0; i < 20000; ++i) {
    const int k = static_cast<int>(rng.range(0, 8));
    const DyadicTube T{Scale(k), rng.range(-(1 << k), 1 << k), rng.range(-(1 << k), 1 << k)};
    // Points on a fine grid so boundary cases show up often.
    const DyadicPoint p{DyadicRational(rng.range(-16, 16), 3), DyadicRational(rng.range(-128, 128), k + 2)};
    EXPECT_EQ(tube_contains(T, p), oracle::tube_contains(T, p)) << T.a << " " << T.b << " k=" << k;
  }
}

TEST(TubeContains, ParameterCellsPartitionLinesThroughPoint) {
  oracle::SplitMix rng{8};
  const Scale sc(4);
  for (int i = 0; i < 500; ++i) {
    const DyadicPoint p{DyadicRational(rng.range(-16, 16), 4), DyadicRational(rng.range(-16, 16), 4)};
    const auto ap = DyadicRational(rng.range(0, 255), 8);
    const auto bp = p.y - ap * p.x;
    const DyadicTube owner{sc, ap.floor_index(4), bp.floor_index(4)};
    EXPECT_TRUE(tube_contains(owner, p));
  }
}

TEST(Parent, Examples) {
  const auto T = DyadicTube::from_params(Scale(3), q(3, 3), q(5, 3));
  const auto P = parent(T, Scale(1));
  EXPECT_EQ(P.slope(), q(0, 0));
  EXPECT_EQ(P.intercept(), q(1, 1));
  EXPECT_EQ(parent(T, Scale(3)), T);
  EXPECT_THROW(parent(T, Scale(4)), ScaleError);
}

TEST(Parent, SampledPointsOfChildLieInParent) {
  oracle::SplitMix rng{13};
  for (int t = 0; t < 10; ++t) {
    const DyadicTube T{Scale(6), rng.range(0, 63), rng.range(0, 63)};
    const auto up = parent(T, Scale(3));
    for (int i = 0; i < 1000; ++i) {
      const auto p = random_point_in(rng, T, 4);
      ASSERT_TRUE(tube_contains(T, p));
      EXPECT_TRUE(tube_contains(up, p));
    }
  }
}

TEST(Children, CountsAndAncestry) {
  const DyadicTube T{Scale(2), 1, 3};
  const auto one = children(T, Scale(3));
  EXPECT_EQ(one.size(), 4u);
  for (const auto& c : one) EXPECT_TRUE(is_ancestor(T, c));
  EXPECT_EQ(children(T, Scale(4)).size(), 16u);
  const auto same = children(T, Scale(2));
  ASSERT_EQ(same.size(), 1u);
  EXPECT_EQ(same.tubes()[0], T);
}

TEST(Children, ForeignChildHasSeparatingPointOnAxis) {
  const DyadicTube T{Scale(2), 1, 1};
  const DyadicTube other{Scale(3), 2, 4};  // parent is (1, 2)
  EXPECT_FALSE(is_ancestor(T, other));
  const DyadicPoint w{q(0, 0), other.intercept()};
  EXPECT_TRUE(tube_contains(other, w));
  EXPECT_FALSE(tube_contains(T, w));
}

TEST(TubesThrough, VerticalAxisSlice) {
  const Scale sc(4);
  const auto F = tubes_through({q(0, 0), q(5, 4)}, sc);
  EXPECT_EQ(F.size(), 16u);
  for (const auto& t : F) EXPECT_EQ(t.b, 5);
}

TEST(TubesThrough, MatchesFullScan) {
  const Scale sc(4);
  const DyadicPoint p{q(1, 1), q(1, 2)};
  const auto F = tubes_through(p, sc);
  std::vector<DyadicTube> brute;
  for (std::int64_t a = 0; a < 16; ++a) {
    for (std::int64_t b = 0; b < 16; ++b) {
      if (tube_contains({sc, a, b}, p)) brute.push_back({sc, a, b});
    }
  }
  EXPECT_EQ(std::vector<DyadicTube>(F.begin(), F.end()), brute);
}

TEST(TubesThrough, MatchesScanInWindowsProperty) {
  oracle::SplitMix rng{17};
  const Scale sc(5);
  const ParamWindow w{q(-1, 0), q(1, 0), q(-2, 0), q(2, 0)};
  for (int i = 0; i < 200; ++i) {
    const DyadicPoint p{DyadicRational(rng.range(-64, 64), 6), DyadicRational(rng.range(-64, 64), 6)};
    const auto F = tubes_through(p, sc, w);
    std::size_t n = 0;
    for (std::int64_t a = -32; a < 32; ++a) {
      for (std::int64_t b = -64; b < 64; ++b) {
        const bool in = tube_contains({sc, a, b}, p);
        n += in;
        if (in) EXPECT_TRUE(F.contains({sc, a, b}));
      }
    }
    EXPECT_EQ(F.size(), n);
  }
}

TEST(TubesThrough, SlopeMultiplicityAtMostFour) {
  oracle::SplitMix rng{2};
  const Scale sc(6);
  const ParamWindow w{q(-2, 0), q(2, 0), q(-4, 0), q(4, 0)};
  for (int i = 0; i < 300; ++i) {
    DyadicPoint p;
    do {
      p = {DyadicRational(rng.range(-64, 64), 6), DyadicRational(rng.range(-64, 64), 6)};
    } while (p.x * p.x + p.y * p.y > q(1, 0));
    const auto F = tubes_through(p, sc, w);
    const auto S = slope_set(F);
    EXPECT_LE(S.size(), F.size());
    EXPECT_LE(F.size(), 4 * S.size());
    std::map<std::int64_t, int> per;
    for (const auto& t : F) EXPECT_LE(++per[t.a], 4);
  }
}

TEST(TubesThrough, Errors) {
  const ParamWindow empty{q(1, 0), q(1, 0), q(0, 0), q(1, 0)};
  EXPECT_THROW(tubes_through({q(0, 0), q(0, 0)}, Scale(2), empty), PreconditionError);
  EXPECT_THROW(tubes_through({q(5, 0), q(0, 0)}, Scale(2)), RangeError);
}

TEST(SlopeSet, Examples) {
  const Scale sc(3);
  const auto F = TubeFamily::from(sc, {{sc, 2, 0}, {sc, 2, 1}, {sc, 2, 5}, {sc, 2, 7}});
  const auto S = slope_set(F);
  ASSERT_EQ(S.size(), 1u);
  EXPECT_EQ(S[0], q(1, 2));
  EXPECT_TRUE(slope_set(TubeFamily(sc)).empty());
  EXPECT_EQ(slope_values(F).grid()[0], 2);
}

TEST(ChildrenInFamily, Examples) {
  const DyadicTube T0{Scale(2), 1, 2};
  EXPECT_EQ(children_in_family(T0, children(T0, Scale(3))).size(), 4u);
  const DyadicTube far{Scale(2), 3, 0};
  EXPECT_TRUE(children_in_family(T0, children(far, Scale(4))).empty());
  EXPECT_THROW(children_in_family(T0, children(T0, Scale(2))), PreconditionError);
}

TEST(Cover, ChildrenOfOneCoarseTube) {
  const Scale coarse(3), fine(6);
  const DyadicTube T0{coarse, 2, 3};
  oracle::SplitMix rng{31};
  std::vector<GridPoint> pts;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  while (pts.size() < 40) {
    const auto p = random_point_in(rng, T0, 3);
    if (p.x.abs() > q(1, 0) || !p.y.on_grid(6) || p.y.abs() > q(4, 0)) continue;
    const GridPoint g{p.x.grid_value(6), p.y.grid_value(6)};
    if (seen.insert({g.x, g.y}).second) pts.push_back(g);
  }
  const auto P = PointSet::from_grid(fine, pts);
  const auto pp = P.points();
  std::vector<DyadicTube> meeting;
  for (const auto& c : children(T0, fine)) {
    if (std::any_of(pp.begin(), pp.end(), [&](const DyadicPoint& p) { return tube_contains(c, p); })) meeting.push_back(c);
  }
  const auto F = TubeFamily::from(fine, meeting);
  const auto M = TubeFamily::from(coarse, {T0});
  const auto out = cover_by_coarse_tubes(F, P, T0.slope(), coarse, M);
  EXPECT_LE(out.size(), 11u);
  for (const auto& t : F) {
    EXPECT_TRUE(std::any_of(out.begin(), out.end(), [&](const DyadicTube& o) { return is_ancestor(o, t); }));
  }
  EXPECT_TRUE(cover_by_coarse_tubes(TubeFamily(fine), P, T0.slope(), coarse, M).empty());
}

TEST(Cover, SinglePointAllFineTubes) {
  const Scale coarse(3), fine(6);
  const DyadicPoint p{q(3, 3), q(5, 4)};
  const auto P = PointSet::from_points(fine, std::vector<DyadicPoint>{p});
  const auto a2 = q(1, 2);
  const auto through = tubes_through(p, coarse);
  std::vector<DyadicTube> m;
  for (const auto& t : through) {
    if (t.slope() == a2) m.push_back(t);
  }
  ASSERT_FALSE(m.empty());
  const auto M = TubeFamily::from(coarse, m);
  const ParamWindow w{a2, a2 + q(1, 3), q(-4, 0), q(4, 0)};
  const auto F = tubes_through(p, fine, w);
  const auto out = cover_by_coarse_tubes(F, P, a2, coarse, M);
  EXPECT_LE(out.size(), 11 * M.size());
  for (const auto& t : F) EXPECT_TRUE(out.contains(parent(t, coarse)));
}

TEST(Cover, PreconditionViolations) {
  const Scale coarse(3), fine(6);
  const auto P = PointSet::from_grid(fine, {{32, 32}});
  const auto M = TubeFamily::from(coarse, {{coarse, 0, 0}});
  EXPECT_THROW(cover_by_coarse_tubes(TubeFamily(fine), P, q(0, 0), coarse, M), PreconditionError);
  const auto far = PointSet::from_grid(fine, {{128, 0}});
  EXPECT_THROW(cover_by_coarse_tubes(TubeFamily(fine), far, q(0, 0), coarse, M), PreconditionError);
}

TEST(Ordinary, HorizontalTubeContainsSampledPoints) {
  oracle::SplitMix rng{41};
  for (int k : {3, 6}) {
    const DyadicTube T{Scale(k), 0, 1};
    const auto O = to_ordinary(T, 1.0);
    int checked = 0;
    while (checked < 1000) {
      const auto p = random_point_in(rng, T, 6);
      const double x = p.x.to_double(), y = p.y.to_double();
      if (x * x + y * y > 1.0) continue;
      ++checked;
      EXPECT_TRUE(O.contains(x, y)) << x << " " << y;
    }
  }
}

TEST(Ordinary, WidthConstants) {
  EXPECT_LE(ordinary_width_constant(1.0), ordinary_width_constant(10.0));
  const DyadicTube T{Scale(4), 5, 2};
  EXPECT_DOUBLE_EQ(to_ordinary(T, 10.0).width, 12.0 / 16.0);
  // The slice over x = 0 is exactly [b, b + delta).
  EXPECT_TRUE(tube_contains(T, {q(0, 0), q(2, 4)}));
  EXPECT_TRUE(tube_contains(T, {q(0, 0), q(47, 8)}));
  EXPECT_FALSE(tube_contains(T, {q(0, 0), q(3, 4)}));
}

TEST(TubeKey, RoundTripAndOrder) {
  const Scale sc(10);
  const DyadicTube a{sc, -3, 900}, b{sc, -3, 901}, c{sc, 4, -1000};
  EXPECT_EQ(DyadicTube::from_key(sc, a.key()), a);
  EXPECT_LT(a.key(), b.key());
  EXPECT_LT(b.key(), c.key());
}
