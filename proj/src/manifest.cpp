#include "tubelab/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "tubelab/covering.hpp"
#include "tubelab/errors.hpp"
#include "tubelab/kernels.hpp"
#include "tubelab/log.hpp"

namespace tubelab {

namespace {

using io::json;

constexpr Analysis kAllAnalyses[] = {Analysis::validate, Analysis::incidence, Analysis::dichotomy, Analysis::sweep,
                                     Analysis::additive};

bool needs_half_scale(Analysis a) { return a == Analysis::incidence || a == Analysis::dichotomy; }

bool applicable(Analysis a, std::optional<GeneratorKind> kind) {
  if (!kind) return a != Analysis::additive;  // input files hold configurations
  switch (a) {
    case Analysis::validate: return true;
    case Analysis::incidence:
    case Analysis::dichotomy: return *kind == GeneratorKind::furstenberg_product;
    case Analysis::sweep:
      return *kind == GeneratorKind::grid || *kind == GeneratorKind::cantor_grid ||
             *kind == GeneratorKind::furstenberg_product || *kind == GeneratorKind::quasi_product;
    case Analysis::additive:
      return *kind == GeneratorKind::quasi_product || *kind == GeneratorKind::collinear_tripod;
  }
  return false;
}

std::string verdict(bool pass) { return pass ? "pass" : "fail"; }

PointSet points_of(const Generated& g) {
  if (const auto* p = std::get_if<PointSet>(&g)) return *p;
  if (const auto* c = std::get_if<Configuration>(&g)) return c->points;
  if (const auto* q = std::get_if<QuasiProductConfig>(&g)) return q->qp.to_point_set();
  if (const auto* t = std::get_if<TripodConfig>(&g)) return t->qp.to_point_set();
  throw PreconditionError("object has no planar point set");
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json pairs_analysis(const QuasiProduct& qp, const TubeFamily& tubes, const std::array<DyadicRational, 3>& lv,
                    bool& pass) {
  const auto sp = tube_slice_pairs(qp, tubes, lv[0], lv[2]);
  json out = {{"levels", {lv[0].to_string(), lv[1].to_string(), lv[2].to_string()}},
              {"pairs", sp.pairs.size()},
              {"tubes_used", sp.tubes_used}};
  out["image_cover"] = tripod_image_cover(sp.pairs, lv[0], lv[1], lv[2], qp.scale);
  out["middle_slice_cover"] = covering_number_1d(qp.slice(lv[1]), qp.scale);
  const auto& A = qp.slice(lv[0]);
  const auto& B = qp.slice(lv[2]);
  const auto pl = plunnecke_corollary_check(A, B, qp.scale);
  out["plunnecke"] = io::to_json(pl);
  pass = pass && pl.holds;
  if (!sp.pairs.empty()) {
    PairGraph G{A, B, {}, 1.0};
    for (const auto& [a1, a3] : sp.pairs) {
      const auto i = std::lower_bound(A.grid().begin(), A.grid().end(), a1.grid_value(qp.scale.k)) - A.grid().begin();
      const auto j = std::lower_bound(B.grid().begin(), B.grid().end(), a3.grid_value(qp.scale.k)) - B.grid().begin();
      G.edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
    G.K = static_cast<double>(A.size()) * B.size() / G.edges.size();
    const auto r = bsg_refine(G);
    const bool ok = bsg_consistent(G, r);
    out["bsg"] = io::to_json(r);
    out["bsg"]["K"] = G.K;
    out["bsg"]["consistent"] = ok;
    pass = pass && ok;
  }
  return out;
}

}  // namespace

std::string to_string(Analysis a) {
  switch (a) {
    case Analysis::validate: return "validate";
    case Analysis::incidence: return "incidence";
    case Analysis::dichotomy: return "dichotomy";
    case Analysis::sweep: return "sweep";
    case Analysis::additive: return "additive";
  }
  return "unknown";
}

Analysis analysis_from_string(const std::string& name) {
  for (auto a : kAllAnalyses) {
    if (to_string(a) == name) return a;
  }
  throw ParseError("unknown analysis '" + name + "'");
}

bool ExperimentManifest::wants(Analysis a) const {
  return std::find(analyses.begin(), analyses.end(), a) != analyses.end();
}

ExperimentManifest manifest_from_json(const json& j) {
  ExperimentManifest m;
  try {
    if (j.contains("spec") == j.contains("input")) throw ParseError("manifest needs exactly one of 'spec' and 'input'");
    if (j.contains("spec")) m.spec = io::generator_spec_from_json(j.at("spec"));
    if (j.contains("input")) m.input = j.at("input").get<std::string>();
    if (j.contains("k_range")) {
      const auto& kr = j.at("k_range");
      if (kr.is_array()) {
        for (const auto& k : kr) m.k_range.push_back(k.get<int>());
      } else {
        const int from = kr.at("from").get<int>(), to = kr.at("to").get<int>(), step = kr.value("step", 2);
        if (step <= 0) throw ParseError("k_range step must be positive");
        for (int k = from; k <= to; k += step) m.k_range.push_back(k);
      }
    } else if (m.spec) {
      m.k_range.push_back(m.spec->k);
    }
    for (const auto& a : j.at("analyses")) m.analyses.push_back(analysis_from_string(a.get<std::string>()));
    m.slack = j.value("slack", 0.2);
    m.out = j.value("out", std::string("tubelab_out"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  if (m.analyses.empty()) throw ParseError("manifest lists no analyses");
  if (m.spec && m.k_range.empty()) throw ParseError("manifest k_range is empty");
  if (!(m.slack >= 0.0)) throw ParseError("slack must be non-negative");
  const std::optional<GeneratorKind> kind = m.spec ? std::optional(m.spec->kind) : std::nullopt;
  for (auto a : m.analyses) {
    if (!applicable(a, kind)) {
      throw ParseError("analysis '" + to_string(a) + "' does not apply to " +
                       (kind ? "generator '" + to_string(*kind) + "'" : std::string("an input configuration")));
    }
    if (needs_half_scale(a)) {
      for (int k : m.k_range) {
        if (k % 2 != 0) throw ParseError("k=" + std::to_string(k) + " is odd; analysis '" + to_string(a) + "' needs even k");
      }
    }
  }
  if (m.spec) {
    for (int k : m.k_range) {
      GeneratorSpec s = *m.spec;
      s.k = k;
      try {
        check_spec(s);
      } catch (const Error& e) {
        throw ParseError(std::string("k=") + std::to_string(k) + ": " + e.what());
      }
    }
  }
  return m;
}

json to_json(const ExperimentManifest& m) {
  json analyses = json::array();
  for (auto a : m.analyses) analyses.push_back(to_string(a));
  json out = {{"schema", "tubelab.manifest/1"}, {"k_range", m.k_range}, {"analyses", analyses},
              {"slack", m.slack}, {"out", m.out}};
  if (m.spec) out["spec"] = io::to_json(*m.spec);
  if (!m.input.empty()) out["input"] = m.input;
  return out;
}

std::string manifest_hash(const ExperimentManifest& m) {
  // The output directory is not part of the experiment.
  auto j = to_json(m);
  j.erase("out");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json analyze_validate(const Generated& g, const GeneratorSpec* spec, bool& pass) {
  const double s = spec ? spec->s : 1.0;
  if (const auto* P = std::get_if<PointSet>(&g)) {
    const double dim = spec && spec->kind == GeneratorKind::cantor_grid ? 2.0 * s : 2.0;
    const auto r = validate(*P, {P->scale(), dim, kCantorGridConstant});
    pass = r.valid;
    return io::to_json(r);
  }
  if (const auto* V = std::get_if<ValueSet>(&g)) {
    const auto r = validate(*V, {V->scale(), s, kCantorLineConstant});
    pass = r.valid;
    return io::to_json(r);
  }
  if (const auto* c = std::get_if<Configuration>(&g)) {
    const auto h = check_hypotheses(*c);
    pass = h.all_hold();
    auto out = io::to_json(h);
    out["epsilon"] = c->epsilon;
    out["required_epsilon"] = required_epsilon(*c);
    return out;
  }
  if (const auto* q = std::get_if<QuasiProductConfig>(&g)) {
    const auto r = validate_quasi_product(q->qp, kSliceConstant);
    const auto pruned = prune_to_single_crossings(q->qp, q->tubes);
    const bool single = pruned.size() == q->tubes.size();
    pass = r.levels_valid && r.slices_valid && single;
    return {{"C", kSliceConstant},
            {"levels_valid", r.levels_valid},
            {"levels_ratio", r.levels_ratio},
            {"slices_valid", r.slices_valid},
            {"worst_slice_ratio", r.worst_slice_ratio},
            {"single_crossings", single}};
  }
  const auto& t = std::get<TripodConfig>(g);
  const bool single = prune_to_single_crossings(t.qp, t.tubes).size() == t.tubes.size();
  pass = single;
  return {{"single_crossings", single}, {"tubes", t.tubes.size()}};
}

json analyze_incidence(const Configuration& cfg, bool& pass) {
  const auto rep = incidence_report(cfg);
  json out = {{"report", io::to_json(rep)}};
  bool ok = rep.incidence_count == rep.incidence_by_tubes;
  if (cfg.points.size() >= 2) {
    const auto cs = cauchy_schwarz_bound(cfg);
    out["cauchy_schwarz"] = io::to_json(cs);
    ok = ok && cs.holds;
  }
  out["pairwise"] = io::to_json(pairwise_intersection_bound_check(cfg));
  out["coarse_energy"] = io::to_json(coarse_energy_check(cfg));
  const auto aux = aux_lemma_check(cfg);
  out["aux"] = io::to_json(aux);
  pass = ok && aux.holds;
  return out;
}

json analyze_dichotomy(const Configuration& cfg, double slack, bool& pass) {
  const auto v = dichotomy_check(cfg, slack);
  pass = v.pass;
  return io::to_json(v);
}

json analyze_sweep(const PointSet& K, double s, bool& pass) {
  const Scale scale = K.scale();
  const auto net = uniform_net(scale);
  const auto sw = sweep(K, net, scale);
  json out = {{"directions", net.angles.size()}, {"summary", io::to_json(summarize(sw))}};
  json exc = json::array();
  pass = true;
  for (double t : {0.5, 0.6, 0.7}) {
    const auto e = exceptional_set(sw, t);
    const double A = kaufman_constant(e.angles.size(), scale, t);
    exc.push_back({{"t", t}, {"count", e.angles.size()}, {"constant", A}});
    pass = pass && A <= kKaufmanConstantLimit;
  }
  out["exceptional"] = exc;
  const auto audit = boundary_audit(K, net, scale, scale.delta() * 0x1p-20);
  out["boundary_audit"] = {{"changed", audit.changed}, {"max_difference", audit.max_difference}};
  if (K.size() >= 2) {
    const auto enet = net_from_values(cantor_line(scale.k, s), std::numbers::pi);
    const auto en = projection_energy(K, enet, s);
    out["energy"] = {{"s", s},
                     {"directions", enet.angles.size()},
                     {"average", en.average},
                     {"constant", en.average / (scale.k * std::numbers::ln2)}};
  }
  return out;
}

json analyze_additive(const Generated& g, bool& pass) {
  pass = true;
  if (const auto* q = std::get_if<QuasiProductConfig>(&g)) {
    const auto lv = q->qp.levels.values();
    if (lv.size() < 3) {
      pass = false;
      return {{"error", "fewer than three levels"}};
    }
    return pairs_analysis(q->qp, q->tubes, {lv.front(), lv[lv.size() / 2], lv.back()}, pass);
  }
  const auto& t = std::get<TripodConfig>(g);
  json out = pairs_analysis(t.qp, t.tubes, t.levels, pass);
  double worst = 0.0;
  const auto& b = t.levels;
  for (const auto& tr : t.triples) worst = std::max(worst, tripod_residual(tr[0], tr[1], tr[2], b[0], b[1], b[2]));
  const double units = worst / t.qp.scale.delta();
  out["max_residual_deltas"] = units;
  pass = pass && units <= kTripodResidualLimit && out["pairs"].get<std::size_t>() == t.tubes.size();
  return out;
}

RunResult run(const ExperimentManifest& m) {
  namespace fs = std::filesystem;
  fs::create_directories(m.out);
  RunResult res;
  const std::string hash = manifest_hash(m);
  std::string csv = io::aggregate_csv_header();
  std::vector<std::pair<Scale, std::uint64_t>> fit_points, fit_tubes, fit_coarse;

  std::vector<std::pair<int, Generated>> jobs;
  if (m.spec) {
    for (int k : m.k_range) {
      GeneratorSpec s = *m.spec;
      s.k = k;
      log::info("generating " + to_string(s.kind) + " at k=" + std::to_string(k));
      jobs.emplace_back(k, generate(s));
    }
  } else {
    auto cfg = io::configuration_from_json(io::read_json_file(m.input));
    const int k = cfg.scale.k;
    jobs.emplace_back(k, std::move(cfg));
  }

  for (const auto& [k, g] : jobs) {
    GeneratorSpec spec_k;
    if (m.spec) {
      spec_k = *m.spec;
      spec_k.k = k;
    }
    json rep = {{"k", k}, {"manifest_hash", hash}};
    if (m.spec) rep["spec"] = io::to_json(spec_k);
    std::string verdicts;
    auto record = [&](Analysis a, bool pass) {
      if (!verdicts.empty()) verdicts += ';';
      verdicts += to_string(a) + "=" + verdict(pass);
      if (!pass) res.failed.push_back("k=" + std::to_string(k) + " " + to_string(a));
    };
    for (auto a : m.analyses) {
      log::info("k=" + std::to_string(k) + ": " + to_string(a));
      bool pass = false;
      switch (a) {
        case Analysis::validate: rep["validate"] = analyze_validate(g, m.spec ? &spec_k : nullptr, pass); break;
        case Analysis::incidence: rep["incidence"] = analyze_incidence(std::get<Configuration>(g), pass); break;
        case Analysis::dichotomy: rep["dichotomy"] = analyze_dichotomy(std::get<Configuration>(g), m.slack, pass); break;
        case Analysis::sweep: rep["sweep"] = analyze_sweep(points_of(g), m.spec ? spec_k.s : 0.5, pass); break;
        case Analysis::additive: rep["additive"] = analyze_additive(g, pass); break;
      }
      record(a, pass);
    }

    const std::string name = "report_k" + std::to_string(k) + ".json";
    io::write_json_file((fs::path(m.out) / name).string(), rep);
    res.written.push_back(name);

    std::size_t npoints = 0;
    if (const auto* c = std::get_if<Configuration>(&g)) {
      const auto ir = incidence_report(*c);
      csv += io::aggregate_csv_row(ir, verdicts);
      fit_tubes.emplace_back(Scale(k), ir.tube_count);
      fit_coarse.emplace_back(Scale(k), ir.coarse_tube_count);
      npoints = c->points.size();
    } else {
      if (const auto* v = std::get_if<ValueSet>(&g)) {
        npoints = v->size();
      } else {
        npoints = points_of(g).size();
      }
      csv += std::to_string(k) + "," + std::to_string(npoints) + ",,,,,," + verdicts + "\n";
    }
    fit_points.emplace_back(Scale(k), npoints);
  }

  io::write_text_file((fs::path(m.out) / "aggregate.csv").string(), csv);
  res.written.push_back("aggregate.csv");

  json fit = {{"manifest_hash", hash}};
  if (fit_points.size() >= 2) {
    fit["points"] = io::to_json(fit_exponent(fit_points));
    if (!fit_tubes.empty()) {
      fit["tubes"] = io::to_json(fit_exponent(fit_tubes));
      fit["coarse_tubes"] = io::to_json(fit_exponent(fit_coarse));
    }
  }
  io::write_json_file((fs::path(m.out) / "fit.json").string(), fit);
  res.written.push_back("fit.json");

  json meta = {{"manifest_hash", hash}, {"started_at", timestamp_utc()}, {"manifest", to_json(m)}};
  io::write_json_file((fs::path(m.out) / "metadata.json").string(), meta);
  res.written.push_back("metadata.json");

  res.exit_code = res.failed.empty() ? 0 : 1;
  return res;
}

}  // namespace tubelab
