#include "tubelab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tubelab/errors.hpp"

namespace tubelab::io {

namespace {

template <class F>
auto parsing(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const HypothesisError&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

i128 parse_integer(const std::string& s) {
  if (s.empty()) throw ParseError("empty number");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size() || s.size() - i > 36) throw ParseError("bad integer '" + s + "'");
  i128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw ParseError("bad integer '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

int log2_exact(i128 d, const std::string& text) {
  if (d <= 0 || (d & (d - 1)) != 0) throw ParseError("denominator is not a power of two in '" + text + "'");
  int e = 0;
  while (d > 1) {
    d >>= 1;
    ++e;
  }
  return e;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

json num_exp(const DyadicRational& v) {
  return json::array({static_cast<std::int64_t>(v.numerator()), v.exponent()});
}

// [a_num, a_exp, b_num, b_exp]
json pair_json(const DyadicRational& a, const DyadicRational& b) {
  return json::array({static_cast<std::int64_t>(a.numerator()), a.exponent(), static_cast<std::int64_t>(b.numerator()),
                      b.exponent()});
}

DyadicRational from_num_exp(const json& n, const json& e) {
  const int exp = e.get<int>();
  if (exp < 0 || exp > DyadicRational::kMaxExponent) throw ParseError("exponent out of range");
  return {n.get<std::int64_t>(), exp};
}

// Scalar: [num, exp] or any form accepted by dyadic_from_json.
DyadicRational scalar_from(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw ParseError("values must be [numerator, exponent]");
    return from_num_exp(j[0], j[1]);
  }
  return dyadic_from_json(j);
}

// Pair: [num, exp, num, exp] or [x, y].
std::pair<DyadicRational, DyadicRational> pair_from(const json& p) {
  if (p.is_array() && p.size() == 4) return {from_num_exp(p[0], p[1]), from_num_exp(p[2], p[3])};
  if (p.is_array() && p.size() == 2) return {dyadic_from_json(p[0]), dyadic_from_json(p[1])};
  throw ParseError("expected [num, exp, num, exp]");
}

std::vector<DyadicPoint> points_from(const json& arr) {
  std::vector<DyadicPoint> pts;
  for (const auto& p : arr) {
    const auto [x, y] = pair_from(p);
    pts.push_back({x, y});
  }
  return pts;
}

int finest_exponent(const std::vector<DyadicPoint>& pts, int k) {
  for (const auto& p : pts) k = std::max({k, p.x.exponent(), p.y.exponent()});
  return k;
}

std::vector<DyadicTube> tubes_from(const json& arr, Scale scale) {
  std::vector<DyadicTube> out;
  for (const auto& t : arr) {
    const auto [a, b] = pair_from(t);
    out.push_back(DyadicTube::from_params(scale, a, b));
  }
  return out;
}

json tubes_json(const TubeFamily& F) {
  json arr = json::array();
  for (const auto& t : F) arr.push_back(pair_json(t.slope(), t.intercept()));
  return arr;
}

json values_json(const ValueSet& V) {
  json arr = json::array();
  for (const auto& v : V.values()) arr.push_back(num_exp(v));
  return arr;
}

json histogram_json(const std::map<std::uint64_t, std::uint64_t>& h) {
  json arr = json::array();
  for (auto [v, c] : h) arr.push_back({v, c});
  return arr;
}

}  // namespace

json to_json(const DyadicRational& v) { return v.to_string(); }

DyadicRational parse_dyadic(const std::string& raw) {
  const std::string text = trim(raw);
  if (const auto pos = text.find("/2^"); pos != std::string::npos) {
    const auto e = parse_integer(text.substr(pos + 3));
    if (e < 0 || e > DyadicRational::kMaxExponent) throw ParseError("exponent out of range in '" + text + "'");
    return {parse_integer(text.substr(0, pos)), static_cast<int>(e)};
  }
  if (const auto pos = text.find('/'); pos != std::string::npos) {
    return {parse_integer(text.substr(0, pos)), log2_exact(parse_integer(text.substr(pos + 1)), text)};
  }
  if (const auto pos = text.find('.'); pos != std::string::npos) {
    const std::string frac = text.substr(pos + 1);
    if (frac.size() > 24) throw ParseError("too many decimals in '" + text + "'");
    std::string digits = text.substr(0, pos) + frac;
    if (digits == "-" || digits == "+" || digits.empty()) throw ParseError("bad decimal '" + text + "'");
    i128 n = parse_integer(digits);
    const int m = static_cast<int>(frac.size());
    // n / 10^m = n / (5^m 2^m): dyadic iff 5^m divides n.
    i128 five = 1;
    for (int i = 0; i < m; ++i) five *= 5;
    if (n % five != 0) throw ParseError("decimal '" + text + "' is not dyadic");
    return {n / five, m};
  }
  return {parse_integer(text), 0};
}

DyadicRational dyadic_from_json(const json& j) {
  if (j.is_string()) return parse_dyadic(j.get<std::string>());
  if (j.is_number_integer()) return DyadicRational::integer(j.get<std::int64_t>());
  if (j.is_number_float()) {
    double d = j.get<double>();
    if (!std::isfinite(d)) throw ParseError("non-finite number");
    // Read the decimal the user wrote, so 0.1 is rejected rather than
    // taken as its nearest double.
    if (const auto text = j.dump(); text.find_first_of("eE") == std::string::npos) return parse_dyadic(text);
    int e = 0;
    while (d != std::floor(d)) {
      if (++e > DyadicRational::kMaxExponent) throw ParseError("number has too many binary digits");
      d *= 2.0;
    }
    if (std::abs(d) > 0x1p100) throw ParseError("number too large");
    return {static_cast<i128>(d), e};
  }
  throw ParseError("expected a dyadic number");
}

json to_json(const PointSet& P) {
  json pts = json::array();
  for (const auto& p : P.points()) pts.push_back(pair_json(p.x, p.y));
  return {{"schema", "tubelab.points/1"}, {"k", P.scale().k}, {"points", pts}};
}

PointSet point_set_from_json(const json& j) {
  return parsing("point set", [&] {
    const Scale scale = Scale::checked(j.at("k").get<int>());
    const auto pts = points_from(j.at("points"));
    return PointSet::from_points(scale, pts);
  });
}

json to_json(const ValueSet& V) {
  return {{"schema", "tubelab.values/1"}, {"k", V.scale().k}, {"values", values_json(V)}};
}

ValueSet value_set_from_json(const json& j) {
  return parsing("value set", [&] {
    const Scale scale = Scale::checked(j.at("k").get<int>());
    std::vector<DyadicRational> vals;
    for (const auto& v : j.at("values")) vals.push_back(scalar_from(v));
    return ValueSet::from_values(scale, vals);
  });
}

json to_json(const TubeFamily& F) {
  return {{"schema", "tubelab.tubes/1"}, {"k", F.scale().k}, {"tubes", tubes_json(F)}};
}

TubeFamily tube_family_from_json(const json& j) {
  return parsing("tube family", [&] {
    const Scale scale = Scale::checked(j.at("k").get<int>());
    return TubeFamily::from(scale, tubes_from(j.at("tubes"), scale));
  });
}

json to_json(const Configuration& cfg) {
  json pts = json::array();
  for (const auto& p : cfg.points.points()) pts.push_back(pair_json(p.x, p.y));
  json fams = json::array();
  for (std::size_t i = 0; i < cfg.families.size(); ++i) {
    fams.push_back({{"point_index", i}, {"tubes", tubes_json(cfg.families[i])}});
  }
  return {{"schema", "tubelab.configuration/1"},
          {"k", cfg.scale.k},
          {"epsilon", cfg.epsilon},
          {"s", cfg.s},
          {"points", pts},
          {"families", fams}};
}

Configuration configuration_from_json(const json& j) {
  return parsing("configuration", [&] {
    Configuration cfg;
    cfg.scale = Scale::checked(j.at("k").get<int>());
    cfg.epsilon = j.value("epsilon", 0.0);
    cfg.s = j.value("s", 0.5);
    const auto pts = points_from(j.at("points"));
    const Scale pscale = Scale::checked(finest_exponent(pts, cfg.scale.k));
    cfg.points = PointSet::from_points(pscale, pts);
    cfg.families.assign(cfg.points.size(), TubeFamily(cfg.scale));
    std::vector<char> seen(cfg.points.size(), 0);
    for (const auto& f : j.at("families")) {
      const auto i = f.at("point_index").get<std::size_t>();
      if (i >= cfg.points.size()) throw ParseError("family refers to point " + std::to_string(i) + " which does not exist");
      if (seen[i]++) throw ParseError("duplicate family for point " + std::to_string(i));
      cfg.families[i] = TubeFamily::from(cfg.scale, tubes_from(f.at("tubes"), cfg.scale));
    }
    return cfg;
  });
}

json to_json(const QuasiProduct& qp, const TubeFamily* tubes) {
  json slices = json::array();
  for (const auto& [b, A] : qp.slices) {
    slices.push_back({{"b", num_exp(DyadicRational::grid(b, qp.scale.k))}, {"values", values_json(A)}});
  }
  json out = {{"schema", "tubelab.quasi_product/1"},
              {"k", qp.scale.k},
              {"s", qp.s},
              {"tau", qp.tau},
              {"levels", values_json(qp.levels)},
              {"slices", slices}};
  if (tubes) out["tubes"] = tubes_json(*tubes);
  return out;
}

QuasiProduct quasi_product_from_json(const json& j) {
  return parsing("quasi-product", [&] {
    QuasiProduct qp;
    qp.scale = Scale::checked(j.at("k").get<int>());
    qp.s = j.value("s", 0.5);
    qp.tau = j.value("tau", 0.5);
    std::vector<DyadicRational> lv;
    for (const auto& v : j.at("levels")) lv.push_back(scalar_from(v));
    qp.levels = ValueSet::from_values(qp.scale, lv);
    for (const auto& sl : j.at("slices")) {
      const auto b = scalar_from(sl.at("b"));
      std::vector<DyadicRational> vals;
      for (const auto& v : sl.at("values")) vals.push_back(scalar_from(v));
      if (!b.on_grid(qp.scale.k)) throw ParseError("slice level off the grid");
      qp.slices.emplace(b.grid_value(qp.scale.k), ValueSet::from_values(qp.scale, vals));
    }
    return qp;
  });
}

json to_json(const TripodConfig& t) {
  json out = to_json(t.qp, &t.tubes);
  out["schema"] = "tubelab.tripod/1";
  out["tripod_levels"] = json::array({to_json(t.levels[0]), to_json(t.levels[1]), to_json(t.levels[2])});
  json triples = json::array();
  for (const auto& tr : t.triples) triples.push_back({to_json(tr[0]), to_json(tr[1]), to_json(tr[2])});
  out["triples"] = triples;
  return out;
}

json to_json(const Generated& g) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, QuasiProductConfig>) {
          return to_json(v.qp, &v.tubes);
        } else {
          return to_json(v);
        }
      },
      g);
}

json to_json(const GeneratorSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"k", spec.k},
          {"s", spec.s},
          {"tau", spec.tau},
          {"seed", spec.seed},
          {"levels", json::array({to_json(spec.levels[0]), to_json(spec.levels[1]), to_json(spec.levels[2])})},
          {"n", spec.n}};
}

GeneratorSpec generator_spec_from_json(const json& j) {
  return parsing("generator spec", [&] {
    GeneratorSpec spec;
    spec.kind = generator_kind(j.at("kind").get<std::string>());
    spec.k = j.value("k", spec.k);
    spec.s = j.value("s", spec.s);
    spec.tau = j.value("tau", spec.tau);
    spec.seed = j.value("seed", spec.seed);
    spec.n = j.value("n", spec.n);
    if (j.contains("levels")) {
      const auto& lv = j.at("levels");
      if (!lv.is_array() || lv.size() != 3) throw ParseError("levels must list three values");
      for (int i = 0; i < 3; ++i) spec.levels[i] = scalar_from(lv[i]);
    }
    return spec;
  });
}

json to_json(const ValidationReport& r) {
  return {{"valid", r.valid},
          {"worst_ratio", r.worst_ratio},
          {"dimension", r.dimension},
          {"k", r.params.scale.k},
          {"s", r.params.s},
          {"C", r.params.C},
          {"size", r.size},
          {"effective_constant", r.effective_constant},
          {"witness",
           {{"center", r.dimension == 1 ? json(to_json(r.witness_center.x))
                                        : json::array({to_json(r.witness_center.x), to_json(r.witness_center.y)})},
            {"radius", to_json(r.witness_radius)},
            {"count", r.witness_count}}}};
}

json to_json(const IncidenceReport& r) {
  return {{"k", r.k},
          {"points", r.points},
          {"incidence_count", r.incidence_count},
          {"incidence_by_tubes", r.incidence_by_tubes},
          {"tube_count", r.tube_count},
          {"coarse_tube_count", r.coarse_tube_count},
          {"coarse_ball_count", r.coarse_ball_count},
          {"e_tubes", r.e_tubes},
          {"e_coarse", r.e_coarse},
          {"nt_histogram", histogram_json(r.nt_histogram)},
          {"mt_histogram", histogram_json(r.mt_histogram)},
          {"hypotheses", r.hypotheses_verified ? "verified" : "violated"}};
}

json to_json(const DichotomyVerdict& v) {
  return {{"verdict", v.pass ? "pass" : "fail"},
          {"slack", v.slack},
          {"e_tubes", v.e_tubes},
          {"e_coarse", v.e_coarse},
          {"margin_tubes", v.margin_tubes},
          {"margin_coarse", v.margin_coarse},
          {"report", to_json(v.report)}};
}

json to_json(const CauchySchwarzReport& r) {
  return {{"lhs", r.lhs},
          {"rhs", r.rhs},
          {"intersection_term", r.intersection_term},
          {"implied_bound", r.implied_bound},
          {"holds", r.holds}};
}

json to_json(const PairwiseBoundReport& r) {
  return {{"max_constant", r.max_constant},
          {"pairs_with_overlap", r.pairs_with_overlap},
          {"worst_pair", {r.worst_p, r.worst_q}},
          {"worst_count", r.worst_count}};
}

json to_json(const CoarseEnergyReport& r) {
  return {{"sum", r.sum}, {"normalized", r.normalized}, {"cells", r.cells}};
}

json to_json(const AuxLemmaReport& r) {
  return {{"max_children", r.max_children}, {"max_ratio", r.max_ratio}, {"holds", r.holds}};
}

json to_json(const HypothesisReport& r) {
  json arr = json::array();
  for (const auto& h : r.results) {
    json e = {{"name", h.name}, {"holds", h.holds}};
    if (!h.witness.empty()) e["witness"] = json::parse(h.witness);
    arr.push_back(e);
  }
  return {{"all_hold", r.all_hold()}, {"hypotheses", arr}};
}

json to_json(const ExponentFit& f) {
  json samples = json::array();
  for (auto [k, c] : f.samples) samples.push_back({k, c});
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"samples", samples}};
}

json to_json(const SweepSummary& s) {
  return {{"min", s.min}, {"q25", s.q25}, {"median", s.median}, {"q75", s.q75}, {"max", s.max}};
}

json to_json(const PlunneckeReport& r) {
  return {{"cover_ab", r.cover_ab}, {"cover_bb", r.cover_bb}, {"c0", r.c0},
          {"bound", r.bound},       {"size_ratio", r.size_ratio}, {"holds", r.holds}};
}

json to_json(const BsgResult& r) {
  return {{"size_a", r.A_refined.size()},
          {"size_b", r.B_refined.size()},
          {"edges_kept", r.edges_kept},
          {"sum_refined", r.sum_refined},
          {"c", std::isfinite(r.c) ? json(r.c) : json(nullptr)},
          {"degenerate", r.degenerate},
          {"rounds", r.rounds}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string aggregate_csv_header() {
  return std::string("# schema: ") + kCsvSchema +
         "\nk,points,tubes,coarse_tubes,incidence_count,e_tubes,e_coarse,verdicts\n";
}

std::string aggregate_csv_row(const IncidenceReport& r, const std::string& verdicts) {
  std::ostringstream os;
  os << r.k << ',' << r.points << ',' << r.tube_count << ',' << r.coarse_tube_count << ',' << r.incidence_count
     << ',' << format_double(r.e_tubes) << ',' << format_double(r.e_coarse) << ',' << verdicts << '\n';
  return os.str();
}

std::string sweep_csv(const ProjectionSweep& sw, const EnergySweep* energy) {
  std::ostringstream os;
  os << "# schema: " << kSweepCsvSchema << "\nangle,count,energy\n";
  for (std::size_t i = 0; i < sw.angles.size(); ++i) {
    os << format_double(sw.angles[i]) << ',' << sw.counts[i] << ',';
    if (energy) os << format_double(energy->energy[i]);
    os << '\n';
  }
  return os.str();
}

std::string pairs_csv(const SlicePairs& pairs) {
  std::ostringstream os;
  os << "# schema: " << kPairsCsvSchema << "\na1,a3\n";
  for (const auto& [a1, a3] : pairs.pairs) os << a1.to_string() << ',' << a3.to_string() << '\n';
  return os.str();
}

}  // namespace tubelab::io
