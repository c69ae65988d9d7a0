#include "tubelab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "tubelab/covering.hpp"
#include "tubelab/delta_sets.hpp"
#include "tubelab/errors.hpp"
#include "tubelab/kernels.hpp"

namespace tubelab {

namespace {

using nlohmann::json;

// Log comparisons tolerate this much rounding in the exponent.
constexpr double kExpTol = 1e-9;

double log2_over_k(double v, int k) { return std::log2(v) / k; }

std::uint64_t pack_cell(std::int64_t x, std::int64_t y) {
  return (static_cast<std::uint64_t>(x + (std::int64_t{1} << 31)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(y + (std::int64_t{1} << 31)));
}

json point_json(const DyadicPoint& p) { return json::array({p.x.to_string(), p.y.to_string()}); }

json tube_json(const DyadicTube& t) { return {{"k", t.scale.k}, {"a", t.a}, {"b", t.b}}; }

// Coarse delta^1/2 cell of each point.
std::vector<std::uint64_t> coarse_cells(const Configuration& cfg) {
  const int shift = cfg.points.scale().k - cfg.scale.half().k;
  std::vector<std::uint64_t> out;
  out.reserve(cfg.points.size());
  for (const auto& g : cfg.points.grid()) out.push_back(pack_cell(g.x >> shift, g.y >> shift));
  return out;
}

std::vector<std::vector<std::uint64_t>> family_keys(const Configuration& cfg) {
  std::vector<std::vector<std::uint64_t>> out;
  out.reserve(cfg.families.size());
  for (const auto& f : cfg.families) out.push_back(f.keys());
  return out;
}

std::vector<std::uint64_t> sorted_incidence_keys(const Configuration& cfg) {
  std::vector<std::uint64_t> all;
  for (const auto& f : cfg.families) {
    for (const auto& t : f) all.push_back(t.key());
  }
  std::sort(all.begin(), all.end());
  return all;
}

HypothesisResult membership(const Configuration& cfg) {
  for (std::size_t i = 0; i < cfg.families.size(); ++i) {
    const auto p = cfg.points.point(i);
    for (const auto& t : cfg.families[i]) {
      if (!tube_contains(t, p)) {
        json w = {{"point_index", i}, {"point", point_json(p)}, {"tube", tube_json(t)}};
        return {kTubeMembership, false, w.dump()};
      }
    }
  }
  return {kTubeMembership, true, {}};
}

void throw_if_failed(const HypothesisResult& r) {
  if (!r.holds) throw HypothesisError(r.name, r.witness);
}

json ball_witness(const ValidationReport& v, double allowed) {
  return {{"center", point_json(v.witness_center)},
          {"radius", v.witness_radius.to_string()},
          {"count", v.witness_count},
          {"allowed", allowed}};
}

IncidenceReport report_impl(const Configuration& cfg, bool verified) {
  IncidenceReport rep;
  rep.k = cfg.scale.k;
  rep.points = cfg.points.size();
  rep.hypotheses_verified = verified;
  for (const auto& f : cfg.families) rep.incidence_count += f.size();

  const auto all = sorted_incidence_keys(cfg);
  std::vector<std::uint64_t> distinct;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    distinct.push_back(all[i]);
    ++rep.nt_histogram[j - i];
    rep.incidence_by_tubes += j - i;
    i = j;
  }
  rep.tube_count = distinct.size();

  const Scale coarse = cfg.scale.half();
  std::vector<std::uint64_t> parents;
  parents.reserve(distinct.size());
  for (auto key : distinct) parents.push_back(parent(DyadicTube::from_key(cfg.scale, key), coarse).key());
  std::sort(parents.begin(), parents.end());
  parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
  rep.coarse_tube_count = parents.size();

  // M_T: coarse cells B with T in T_B, from distinct (parent, cell) pairs.
  const auto cells = coarse_cells(cfg);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pc;
  for (std::size_t i = 0; i < cfg.families.size(); ++i) {
    for (const auto& t : cfg.families[i]) pc.emplace_back(parent(t, coarse).key(), cells[i]);
  }
  std::sort(pc.begin(), pc.end());
  pc.erase(std::unique(pc.begin(), pc.end()), pc.end());
  for (std::size_t i = 0; i < pc.size();) {
    std::size_t j = i;
    while (j < pc.size() && pc[j].first == pc[i].first) ++j;
    ++rep.mt_histogram[j - i];
    i = j;
  }

  std::vector<std::uint64_t> cell_set = cells;
  std::sort(cell_set.begin(), cell_set.end());
  rep.coarse_ball_count = std::unique(cell_set.begin(), cell_set.end()) - cell_set.begin();

  const int k = cfg.scale.k;
  rep.e_tubes = rep.tube_count ? log2_over_k(static_cast<double>(rep.tube_count), k) : 0.0;
  rep.e_coarse = rep.coarse_tube_count ? log2_over_k(static_cast<double>(rep.coarse_tube_count), k) : 0.0;
  return rep;
}

}  // namespace

bool HypothesisReport::all_hold() const { return first_failure() == nullptr; }

const HypothesisResult* HypothesisReport::first_failure() const {
  for (const auto& r : results) {
    if (!r.holds) return &r;
  }
  return nullptr;
}

void check_configuration(const Configuration& cfg) {
  Scale::checked(cfg.scale.k);
  if (!cfg.scale.is_even() || cfg.scale.k == 0) throw PreconditionError("configuration scale k must be even and positive");
  if (cfg.points.empty()) throw PreconditionError("configuration has no points");
  if (cfg.points.scale() < cfg.scale) throw ScaleError("points must be resolved at least to the tube scale");
  if (cfg.families.size() != cfg.points.size()) throw PreconditionError("one tube family per point required");
  for (const auto& f : cfg.families) {
    if (!f.empty() && f.scale() != cfg.scale) throw PreconditionError("tube family at the wrong scale");
  }
  if (!(cfg.s > 0.0 && cfg.s <= 1.0)) throw PreconditionError("s must lie in (0, 1]");
  if (!(cfg.epsilon >= 0.0)) throw PreconditionError("epsilon must be non-negative");
  throw_if_failed(membership(cfg));
}

HypothesisReport check_hypotheses(const Configuration& cfg) {
  check_configuration(cfg);
  HypothesisReport out;
  const int k = cfg.scale.k;
  const double eps = cfg.epsilon;
  // same exponent tolerance as the size checks
  const double C = std::pow(2.0, k * (eps + kExpTol));
  out.results.push_back({kTubeMembership, true, {}});

  HypothesisResult ball{kUnitBall, true, {}};
  const auto one = DyadicRational::integer(1);
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    const auto p = cfg.points.point(i);
    if (p.x * p.x + p.y * p.y > one) {
      ball = {kUnitBall, false, json{{"point_index", i}, {"point", point_json(p)}}.dump()};
      break;
    }
  }
  out.results.push_back(ball);

  try {
    const auto pv = validate(cfg.points, {cfg.scale, 1.0, C});
    out.results.push_back({kPointsFrostman, pv.valid, pv.valid ? "" : ball_witness(pv, C * std::pow(2.0, k - pv.witness_radius.exponent())).dump()});
  } catch (const PreconditionError&) {
    // points closer than delta: no (delta, 1)-set at any constant
    out.results.push_back({kPointsFrostman, false, json{{"reason", "points are not delta-separated"}}.dump()});
  }

  const double size_req = std::pow(2.0, k * (1.0 - eps));
  const bool large = log2_over_k(static_cast<double>(cfg.points.size()), k) >= 1.0 - eps - kExpTol;
  out.results.push_back({kPointsLarge, large, large ? "" : json{{"size", cfg.points.size()}, {"required", size_req}}.dump()});

  const auto cov = covering_number(cfg.points, cfg.scale.half());
  const bool sparse = log2_over_k(static_cast<double>(cov), k) <= 0.5 + eps + kExpTol;
  out.results.push_back({kCoarseSparse, sparse,
                         sparse ? "" : json{{"coarse_cells", cov}, {"allowed", std::pow(2.0, k * (0.5 + eps))}}.dump()});

  HypothesisResult slopes{kSlopesFrostman, true, {}};
  HypothesisResult sizes{kFamiliesLarge, true, {}};
  for (std::size_t i = 0; i < cfg.families.size(); ++i) {
    const auto& f = cfg.families[i];
    if (sizes.holds && (f.empty() || log2_over_k(static_cast<double>(f.size()), k) < cfg.s - eps - kExpTol)) {
      sizes = {kFamiliesLarge, false,
               json{{"point_index", i}, {"size", f.size()}, {"required", std::pow(2.0, k * (cfg.s - eps))}}.dump()};
    }
    if (slopes.holds && !f.empty()) {
      const auto sv = validate(slope_values(f), {cfg.scale, cfg.s, C});
      if (!sv.valid) {
        auto w = ball_witness(sv, C * std::pow(2.0, (k - sv.witness_radius.exponent()) * cfg.s));
        w["point_index"] = i;
        w["center"] = sv.witness_center.x.to_string();
        slopes = {kSlopesFrostman, false, w.dump()};
      }
    }
  }
  out.results.push_back(slopes);
  out.results.push_back(sizes);
  return out;
}

double required_epsilon(const Configuration& cfg) {
  check_configuration(cfg);
  const int k = cfg.scale.k;
  double eps = 0.0;
  try {
    eps = std::max(eps, log2_over_k(validate(cfg.points, {cfg.scale, 1.0, 1.0}).worst_ratio, k));
  } catch (const PreconditionError&) {
    return std::numeric_limits<double>::infinity();
  }
  eps = std::max(eps, 1.0 - log2_over_k(static_cast<double>(cfg.points.size()), k));
  eps = std::max(eps, log2_over_k(static_cast<double>(covering_number(cfg.points, cfg.scale.half())), k) - 0.5);
  for (const auto& f : cfg.families) {
    if (f.empty()) return std::numeric_limits<double>::infinity();
    eps = std::max(eps, cfg.s - log2_over_k(static_cast<double>(f.size()), k));
    eps = std::max(eps, log2_over_k(validate(slope_values(f), {cfg.scale, cfg.s, 1.0}).worst_ratio, k));
  }
  return eps;
}

TubeFamily union_tubes(const Configuration& cfg) {
  std::vector<DyadicTube> all;
  for (const auto& f : cfg.families) all.insert(all.end(), f.begin(), f.end());
  return TubeFamily::from(cfg.scale, std::move(all));
}

IncidenceReport incidence_report(const Configuration& cfg) {
  const auto hyp = check_hypotheses(cfg);
  return report_impl(cfg, hyp.all_hold());
}

std::uint64_t tubes_with_multiplicity_at_least(const IncidenceReport& rep, double theta) {
  const double threshold = std::pow(2.0, rep.k * theta);
  std::uint64_t n = 0;
  for (auto [nt, count] : rep.nt_histogram) {
    if (static_cast<double>(nt) >= threshold * (1.0 - 1e-12)) n += count;
  }
  return n;
}

CauchySchwarzReport cauchy_schwarz_bound(const Configuration& cfg) {
  check_configuration(cfg);
  if (cfg.points.size() < 2) throw PreconditionError("cauchy_schwarz_bound needs at least two points");
  const auto rep = report_impl(cfg, false);
  CauchySchwarzReport out;
  // sum_{p != q} |T_p ∩ T_q| = sum_T N_T (N_T - 1)
  for (auto [nt, count] : rep.nt_histogram) out.intersection_term += count * nt * (nt - 1);
  const double I = static_cast<double>(rep.incidence_count);
  out.lhs = I;
  out.rhs = std::sqrt(static_cast<double>(rep.tube_count)) * std::sqrt(I + static_cast<double>(out.intersection_term));
  out.implied_bound = I > 0 ? I * I / (I + static_cast<double>(out.intersection_term)) : 0.0;
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

PairwiseBoundReport pairwise_intersection_bound_check(const Configuration& cfg) {
  check_configuration(cfg);
  const auto keys = family_keys(cfg);
  const auto pairs = kernels::parallel::pair_intersections(keys);
  const double unit = std::ldexp(1.0, -cfg.points.scale().k);
  PairwiseBoundReport out;
  for (const auto& pc : pairs) {
    if (pc.count == 0) continue;
    ++out.pairs_with_overlap;
    const auto& a = cfg.points.grid(pc.p);
    const auto& b = cfg.points.grid(pc.q);
    const double d = std::hypot(static_cast<double>(a.x - b.x), static_cast<double>(a.y - b.y)) * unit;
    const double A = pc.count / (1.0 / d + 1.0);
    if (A > out.max_constant) {
      out.max_constant = A;
      out.worst_p = pc.p;
      out.worst_q = pc.q;
      out.worst_count = pc.count;
    }
  }
  return out;
}

DichotomyVerdict dichotomy_check(const Configuration& cfg, double slack) {
  const auto hyp = check_hypotheses(cfg);
  if (const auto* f = hyp.first_failure()) throw HypothesisError(f->name, f->witness);
  DichotomyVerdict v;
  v.report = report_impl(cfg, true);
  v.slack = slack;
  v.e_tubes = v.report.e_tubes;
  v.e_coarse = v.report.e_coarse;
  v.margin_tubes = v.e_tubes - (2.0 * cfg.s - slack);
  v.margin_coarse = v.e_coarse - (cfg.s - slack);
  v.pass = v.margin_tubes >= -kExpTol || v.margin_coarse >= -kExpTol;
  return v;
}

CoarseEnergyReport coarse_energy_check(const Configuration& cfg) {
  check_configuration(cfg);
  const auto cells = coarse_cells(cfg);
  const Scale coarse = cfg.scale.half();
  std::vector<std::uint64_t> ids = cells;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::vector<std::vector<std::uint64_t>> fam(ids.size());
  std::vector<std::size_t> rep(ids.size(), cfg.points.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto c = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), cells[i]) - ids.begin());
    if (rep[c] == cfg.points.size() || cfg.points.grid(i) < cfg.points.grid(rep[c])) rep[c] = i;
    for (const auto& t : cfg.families[i]) fam[c].push_back(parent(t, coarse).key());
  }
  for (auto& f : fam) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
  }

  const auto pairs = kernels::parallel::pair_intersections(fam);
  const double unit = std::ldexp(1.0, -cfg.points.scale().k);
  std::vector<double> terms;
  for (const auto& pc : pairs) {
    if (pc.count == 0) continue;
    const auto& a = cfg.points.grid(rep[pc.p]);
    const auto& b = cfg.points.grid(rep[pc.q]);
    const double d = std::hypot(static_cast<double>(a.x - b.x), static_cast<double>(a.y - b.y)) * unit;
    terms.push_back(2.0 * pc.count / std::pow(d, 1.0 - cfg.s));
  }
  CoarseEnergyReport out;
  out.cells = ids.size();
  out.sum = kernels::pairwise_sum(terms);
  out.normalized = out.sum * cfg.scale.delta();
  return out;
}

AuxLemmaReport aux_lemma_check(const Configuration& cfg) {
  check_configuration(cfg);
  const Scale coarse = cfg.scale.half();
  const double growth = std::pow(2.0, coarse.k * cfg.s);
  AuxLemmaReport out;
  for (const auto& f : cfg.families) {
    if (f.empty()) continue;
    const double Cp = validate(slope_values(f), {cfg.scale, cfg.s, 1.0}).worst_ratio;
    std::vector<std::uint64_t> par;
    for (const auto& t : f) par.push_back(parent(t, coarse).key());
    std::sort(par.begin(), par.end());
    for (std::size_t i = 0; i < par.size();) {
      std::size_t j = i;
      while (j < par.size() && par[j] == par[i]) ++j;
      out.max_children = std::max<std::uint64_t>(out.max_children, j - i);
      out.max_ratio = std::max(out.max_ratio, (j - i) / (Cp * growth));
      i = j;
    }
  }
  out.holds = out.max_ratio <= 4.0 + 1e-12;
  return out;
}

}  // namespace tubelab
