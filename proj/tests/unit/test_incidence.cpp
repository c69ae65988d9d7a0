#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "tubelab/covering.hpp"
#include "tubelab/delta_sets.hpp"
#include "tubelab/generators.hpp"
#include "tubelab/incidence.hpp"

using namespace tubelab;

namespace {

DyadicRational q(std::int64_t n, int e) { return DyadicRational(n, e); }

// Every tube through each point inside the window.
Configuration through_all(const PointSet& P, Scale sc, double s, const ParamWindow& w = ParamWindow::unit()) {
  Configuration cfg{P, sc, {}, s, 0.0};
  for (std::size_t i = 0; i < P.size(); ++i) cfg.families.push_back(tubes_through(P.point(i), sc, w));
  return cfg;
}

Configuration shuffled(const Configuration& cfg, std::uint64_t seed) {
  std::vector<std::size_t> order(cfg.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 g(seed);
  std::shuffle(order.begin(), order.end(), g);
  std::vector<GridPoint> pts;
  Configuration out{{}, cfg.scale, {}, cfg.s, cfg.epsilon};
  for (auto i : order) {
    pts.push_back(cfg.points.grid(i));
    auto t = std::vector<DyadicTube>(cfg.families[i].begin(), cfg.families[i].end());
    std::shuffle(t.begin(), t.end(), g);
    out.families.push_back(TubeFamily::from(cfg.scale, t));
  }
  out.points = PointSet::from_grid(cfg.points.scale(), pts);
  return out;
}

}  // namespace

TEST(Configuration, StructuralChecks) {
  const auto P = PointSet::from_grid(Scale(4), {{1, 1}});
  Configuration cfg = through_all(P, Scale(4), 0.5);
  EXPECT_NO_THROW(check_configuration(cfg));
  auto odd = through_all(PointSet::from_grid(Scale(3), {{1, 1}}), Scale(3), 0.5);
  EXPECT_THROW(check_configuration(odd), PreconditionError);
  auto missing = cfg;
  missing.families.clear();
  EXPECT_THROW(check_configuration(missing), PreconditionError);
  auto bad = cfg;
  bad.families[0] = TubeFamily::from(Scale(4), {{Scale(4), 0, 9}});
  try {
    check_configuration(bad);
    FAIL() << "expected a hypothesis error";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.hypothesis(), kTubeMembership);
    EXPECT_NE(e.witness().find("point_index"), std::string::npos);
  }
}

TEST(UnionTubes, Examples) {
  const Scale sc(4);
  const auto P = PointSet::from_grid(sc, {{0, 0}});
  Configuration one{P, sc, {TubeFamily::from(sc, {{sc, 3, 0}})}, 0.5, 0.0};
  EXPECT_EQ(union_tubes(one).size(), 1u);

  const auto two = through_all(PointSet::from_grid(Scale(6), {{0, 0}, {0, 1}}), sc, 0.5);
  EXPECT_EQ(two.families[0].keys(), two.families[1].keys());
  EXPECT_EQ(union_tubes(two).size(), two.families[0].size());
}

TEST(UnionTubes, MatchesHashDedupe) {
  const auto cfg = furstenberg_product(8, 0.5, 3);
  std::set<std::uint64_t> keys;
  for (const auto& f : cfg.families) {
    for (const auto& t : f) keys.insert(t.key());
  }
  EXPECT_EQ(union_tubes(cfg).size(), keys.size());
}

TEST(IncidenceReport, SinglePoint) {
  const auto cfg = through_all(PointSet::from_grid(Scale(4), {{3, 5}}), Scale(4), 0.5);
  const auto rep = incidence_report(cfg);
  EXPECT_EQ(rep.incidence_count, cfg.families[0].size());
  ASSERT_EQ(rep.nt_histogram.size(), 1u);
  EXPECT_EQ(rep.nt_histogram.begin()->first, 1u);
}

TEST(IncidenceReport, TwoPointsSharingFamilies) {
  const auto cfg = through_all(PointSet::from_grid(Scale(6), {{0, 0}, {0, 1}}), Scale(4), 0.5);
  const std::uint64_t m = cfg.families[0].size();
  const auto rep = incidence_report(cfg);
  EXPECT_EQ(rep.incidence_count, 2 * m);
  ASSERT_EQ(rep.nt_histogram.size(), 1u);
  EXPECT_EQ(rep.nt_histogram.begin()->first, 2u);
  EXPECT_EQ(rep.nt_histogram.begin()->second, m);
}

TEST(IncidenceReport, DoubleCountingOnGenerator) {
  const auto cfg = furstenberg_product(10, 0.5, 1);
  const auto rep = incidence_report(cfg);
  std::uint64_t by_points = 0;
  for (const auto& f : cfg.families) by_points += f.size();
  std::uint64_t by_tubes = 0;
  const auto mult = oracle::tube_multiplicities(cfg);
  for (const auto& [_, n] : mult) by_tubes += n;
  EXPECT_EQ(rep.incidence_count, by_points);
  EXPECT_EQ(rep.incidence_by_tubes, by_tubes);
  EXPECT_EQ(rep.incidence_count, rep.incidence_by_tubes);
  EXPECT_EQ(rep.tube_count, mult.size());
  std::map<std::uint64_t, std::uint64_t> hist;
  for (const auto& [_, n] : mult) ++hist[n];
  EXPECT_EQ(rep.nt_histogram, hist);
}

TEST(IncidenceReport, CoarseCountsBracketTubeCount) {
  for (double s : {0.3, 0.6}) {
    const auto cfg = furstenberg_product(8, s, 2);
    const auto rep = incidence_report(cfg);
    std::set<std::uint64_t> parents;
    for (const auto& f : cfg.families) {
      for (const auto& t : f) parents.insert(parent(t, Scale(4)).key());
    }
    EXPECT_EQ(rep.coarse_tube_count, parents.size());
    EXPECT_LE(rep.coarse_tube_count, rep.tube_count);
    EXPECT_LE(rep.tube_count, 256 * rep.coarse_tube_count);
    EXPECT_EQ(rep.coarse_ball_count, covering_number(cfg.points, Scale(4)));
    std::uint64_t mt_total = 0;
    for (const auto& [m, n] : rep.mt_histogram) mt_total += n;
    EXPECT_EQ(mt_total, rep.coarse_tube_count);
    EXPECT_NEAR(rep.e_tubes, std::log2(static_cast<double>(rep.tube_count)) / 8.0, 1e-12);
  }
}

TEST(IncidenceReport, InvariantUnderReordering) {
  const auto cfg = furstenberg_product(8, 0.5, 5);
  const auto a = incidence_report(cfg), b = incidence_report(shuffled(cfg, 99));
  EXPECT_EQ(a.incidence_count, b.incidence_count);
  EXPECT_EQ(a.tube_count, b.tube_count);
  EXPECT_EQ(a.coarse_tube_count, b.coarse_tube_count);
  EXPECT_EQ(a.nt_histogram, b.nt_histogram);
  EXPECT_EQ(a.mt_histogram, b.mt_histogram);
}

TEST(IncidenceReport, MultiplicityThreshold) {
  const auto cfg = through_all(PointSet::from_grid(Scale(6), {{0, 0}, {0, 1}, {40, 3}}), Scale(4), 0.5);
  const auto rep = incidence_report(cfg);
  std::uint64_t at_least_two = 0;
  for (const auto& [n, c] : rep.nt_histogram) at_least_two += n >= 2 ? c : 0;
  // delta^-theta = 2 at theta = 1/4 for k = 4.
  EXPECT_EQ(tubes_with_multiplicity_at_least(rep, 0.25), at_least_two);
  EXPECT_EQ(tubes_with_multiplicity_at_least(rep, 0.0), rep.tube_count);
}

TEST(CauchySchwarz, DisjointFamilies) {
  const Scale sc(4);
  const auto P = PointSet::from_grid(sc, {{0, 0}, {0, 8}});
  Configuration cfg{P, sc, {TubeFamily::from(sc, {{sc, 1, 0}, {sc, 2, 0}}), TubeFamily::from(sc, {{sc, 1, 8}})}, 0.5, 0.0};
  const auto r = cauchy_schwarz_bound(cfg);
  EXPECT_EQ(r.intersection_term, 0u);
  EXPECT_DOUBLE_EQ(r.implied_bound, 3.0);
  EXPECT_TRUE(r.holds);
}

TEST(CauchySchwarz, IdenticalFamilies) {
  const auto cfg = through_all(PointSet::from_grid(Scale(6), {{0, 0}, {0, 1}}), Scale(4), 0.5);
  const double m = static_cast<double>(cfg.families[0].size());
  const auto r = cauchy_schwarz_bound(cfg);
  EXPECT_EQ(r.intersection_term, static_cast<std::uint64_t>(2 * m));
  EXPECT_DOUBLE_EQ(r.implied_bound, m);
  EXPECT_DOUBLE_EQ(r.lhs, 2 * m);
}

TEST(CauchySchwarz, SinglePointIsDegenerate) {
  const auto cfg = through_all(PointSet::from_grid(Scale(4), {{3, 5}}), Scale(4), 0.5);
  EXPECT_THROW(cauchy_schwarz_bound(cfg), PreconditionError);
}

TEST(CauchySchwarz, HoldsAcrossCorpusWithOracleTerm) {
  for (int k : {6, 8}) {
    for (double s : {0.25, 0.5, 0.75}) {
      const auto cfg = furstenberg_product(k, s, static_cast<std::uint64_t>(k));
      const auto r = cauchy_schwarz_bound(cfg);
      EXPECT_EQ(r.intersection_term, oracle::pairwise_overlap(cfg));
      EXPECT_TRUE(r.holds);
      EXPECT_LE(r.lhs, r.rhs * (1 + 1e-12));
      EXPECT_LE(r.implied_bound, static_cast<double>(union_tubes(cfg).size()) * (1 + 1e-12));
    }
  }
}

TEST(PairwiseBound, Examples) {
  const Scale sc(4);
  const auto P = PointSet::from_grid(sc, {{0, 0}, {0, 8}});
  Configuration disjoint{P, sc, {TubeFamily::from(sc, {{sc, 1, 0}}), TubeFamily::from(sc, {{sc, 1, 8}})}, 0.5, 0.0};
  const auto r = pairwise_intersection_bound_check(disjoint);
  EXPECT_EQ(r.pairs_with_overlap, 0u);
  EXPECT_EQ(r.max_constant, 0.0);
}

TEST(PairwiseBound, MatchesPairScan) {
  const auto cfg = furstenberg_product(8, 0.5, 4);
  const auto r = pairwise_intersection_bound_check(cfg);
  double worst = 0.0;
  std::size_t pairs = 0;
  for (std::size_t p = 0; p < cfg.families.size(); ++p) {
    for (std::size_t q = p + 1; q < cfg.families.size(); ++q) {
      std::uint64_t n = 0;
      for (const auto& t : cfg.families[p]) n += cfg.families[q].contains(t);
      if (n == 0) continue;
      ++pairs;
      const auto a = cfg.points.point(p), b = cfg.points.point(q);
      const double d = std::hypot((a.x - b.x).to_double(), (a.y - b.y).to_double());
      worst = std::max(worst, n / (1.0 / d + 1.0));
    }
  }
  EXPECT_EQ(r.pairs_with_overlap, pairs);
  EXPECT_NEAR(r.max_constant, worst, 1e-12);
  EXPECT_LE(r.max_constant, 16.0);
}

TEST(Hypotheses, GeneratorSatisfiesAllAtItsEpsilon) {
  const auto cfg = furstenberg_product(8, 0.5, 1);
  EXPECT_NEAR(cfg.epsilon, required_epsilon(cfg), 1e-12);
  EXPECT_TRUE(check_hypotheses(cfg).all_hold());
  auto tighter = cfg;
  tighter.epsilon = std::max(0.0, cfg.epsilon - 0.05);
  if (cfg.epsilon > 0.05) EXPECT_FALSE(check_hypotheses(tighter).all_hold());
}

TEST(Hypotheses, SpreadPointsBreakCoarseSparsity) {
  // Two points in each of the 64 coarse cells of [0, 1/2)^2 at delta = 2^-8.
  std::vector<GridPoint> pts;
  for (std::int64_t i = 0; i < 8; ++i) {
    for (std::int64_t j = 0; j < 8; ++j) {
      pts.push_back({16 * i + 3, 16 * j + 5});
      pts.push_back({16 * i + 11, 16 * j + 12});
    }
  }
  auto cfg = through_all(PointSet::from_grid(Scale(8), pts), Scale(8), 0.5);
  cfg.epsilon = 0.2;
  const auto hyp = check_hypotheses(cfg);
  const auto* f = hyp.first_failure();
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->name, kCoarseSparse);
  EXPECT_FALSE(f->witness.empty());
  try {
    dichotomy_check(cfg, 0.2);
    FAIL() << "expected a hypothesis error";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.hypothesis(), kCoarseSparse);
  }
}

TEST(Hypotheses, ConcentratedPointsAreNotFrostman) {
  // All points in one coarse cell: the coarse count is tiny, but P is far from
  // a (delta, 1)-set.
  std::vector<GridPoint> pts;
  for (std::int64_t i = 0; i < 16; ++i) {
    for (std::int64_t j = 0; j < 16; ++j) pts.push_back({i, j});
  }
  auto cfg = through_all(PointSet::from_grid(Scale(8), pts), Scale(8), 0.5);
  const auto hyp = check_hypotheses(cfg);
  EXPECT_EQ(hyp.first_failure()->name, kPointsFrostman);
  EXPECT_THROW(dichotomy_check(cfg, 0.2), HypothesisError);
}

TEST(Hypotheses, UnitBall) {
  auto cfg = through_all(PointSet::from_grid(Scale(4), {{16, 16}}), Scale(4), 0.5);
  EXPECT_EQ(check_hypotheses(cfg).first_failure()->name, kUnitBall);
}

TEST(Dichotomy, FullFamiliesPass) {
  std::vector<GridPoint> pts;
  for (std::int64_t i = 0; i < 8; ++i) {
    for (std::int64_t j = 0; j < 8; ++j) pts.push_back({i, j});
  }
  auto cfg = through_all(PointSet::from_grid(Scale(4), pts), Scale(4), 1.0);
  cfg.epsilon = required_epsilon(cfg);
  // 128 tubes at delta = 1/16, 16 coarse cells
  const auto v = dichotomy_check(cfg, 0.25);
  EXPECT_TRUE(v.pass);
  EXPECT_DOUBLE_EQ(v.e_tubes, 1.75);
  EXPECT_DOUBLE_EQ(v.e_coarse, 0.75);
  EXPECT_FALSE(dichotomy_check(cfg, 0.2).pass);
  EXPECT_TRUE(v.report.hypotheses_verified);
  EXPECT_NEAR(v.e_tubes, std::log2(static_cast<double>(union_tubes(cfg).size())) / 4.0, 1e-12);
}

TEST(Dichotomy, FurstenbergProductPasses) {
  const auto cfg = furstenberg_product(12, 0.5, 1);
  const auto v = dichotomy_check(cfg, 0.2);
  EXPECT_TRUE(v.pass) << v.e_tubes << " " << v.e_coarse;
  EXPECT_NEAR(v.margin_tubes, v.e_tubes - (1.0 - 0.2), 1e-12);
  EXPECT_NEAR(v.margin_coarse, v.e_coarse - (0.5 - 0.2), 1e-12);
}

TEST(CoarseEnergy, Trivial) {
  const auto one = through_all(PointSet::from_grid(Scale(4), {{0, 0}, {1, 1}}), Scale(4), 0.5);
  EXPECT_EQ(coarse_energy_check(one).sum, 0.0);
  const Scale sc(4);
  const auto P = PointSet::from_grid(sc, {{0, 0}, {0, 8}});
  Configuration apart{P, sc, {TubeFamily::from(sc, {{sc, 1, 0}}), TubeFamily::from(sc, {{sc, 1, 8}})}, 0.5, 0.0};
  const auto r = coarse_energy_check(apart);
  EXPECT_EQ(r.cells, 2u);
  EXPECT_EQ(r.sum, 0.0);
}

TEST(CoarseEnergy, MatchesDirectSum) {
  const auto cfg = furstenberg_product(8, 0.5, 6);
  const int h = 4;
  std::map<std::pair<std::int64_t, std::int64_t>, std::pair<GridPoint, std::set<std::uint64_t>>> cells;
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    const auto g = cfg.points.grid(i);
    auto [it, fresh] = cells.try_emplace({g.x >> h, g.y >> h}, g, std::set<std::uint64_t>{});
    if (!fresh) it->second.first = std::min(it->second.first, g);
    for (const auto& t : cfg.families[i]) it->second.second.insert(parent(t, Scale(h)).key());
  }
  double sum = 0.0;
  for (const auto& [ka, a] : cells) {
    for (const auto& [kb, b] : cells) {
      if (ka == kb) continue;
      std::size_t common = 0;
      for (auto key : a.second) common += b.second.count(key);
      const double d = std::hypot(std::ldexp(double(a.first.x - b.first.x), -8), std::ldexp(double(a.first.y - b.first.y), -8));
      sum += common / std::pow(d, 1.0 - cfg.s);
    }
  }
  const auto r = coarse_energy_check(cfg);
  EXPECT_EQ(r.cells, cells.size());
  EXPECT_NEAR(r.sum, sum, 1e-9 * std::max(1.0, sum));
  EXPECT_NEAR(r.normalized, r.sum / 256.0, 1e-12 * std::max(1.0, r.sum));
}

TEST(AuxLemma, HoldsOnGenerators) {
  for (int k : {6, 8, 10}) {
    const auto cfg = furstenberg_product(k, 0.5, 7);
    const auto r = aux_lemma_check(cfg);
    EXPECT_TRUE(r.holds) << "k=" << k << " ratio=" << r.max_ratio;
    EXPECT_GE(r.max_children, 1u);
  }
}

TEST(AuxLemma, ChildCountsMatchDirectScan) {
  const auto cfg = furstenberg_product(8, 0.6, 8);
  std::uint64_t worst = 0;
  for (const auto& f : cfg.families) {
    std::map<std::uint64_t, std::uint64_t> per;
    for (const auto& t : f) worst = std::max(worst, ++per[parent(t, Scale(4)).key()]);
  }
  EXPECT_EQ(aux_lemma_check(cfg).max_children, worst);
}
