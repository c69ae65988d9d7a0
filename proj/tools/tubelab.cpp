// tubelab command-line harness.
//
// Exit codes: 0 success, 1 a requested verdict failed, 2 bad input or
// parameters, 3 a hypothesis was violated (witness JSON on stdout),
// 4 internal error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <numbers>

#include "tubelab/covering.hpp"
#include "tubelab/errors.hpp"
#include "tubelab/kernels.hpp"
#include "tubelab/log.hpp"
#include "tubelab/manifest.hpp"
#include "tubelab/serialize.hpp"

using namespace tubelab;
using io::json;

namespace {

struct Options {
  std::string input;
  std::string kind;
  int k = 8;
  double s = 0.5;
  double tau = 0.5;
  double C = 4.0;
  double slack = 0.2;
  std::uint64_t seed = 1;
  std::size_t n = 16;
  std::string out;
  std::string csv;
  std::string manifest;
  int threads = 0;
};

void emit(const Options& o, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(o.out, text);
  }
}

GeneratorSpec spec_from(const Options& o, GeneratorKind fallback) {
  GeneratorSpec spec;
  spec.kind = o.kind.empty() ? fallback : generator_kind(o.kind);
  spec.k = o.k;
  spec.s = o.s;
  spec.tau = o.tau;
  spec.seed = o.seed;
  spec.n = o.n;
  return spec;
}

Generated load(const std::string& path) {
  const auto j = io::read_json_file(path);
  const std::string schema = j.value("schema", "");
  if (schema.rfind("tubelab.configuration", 0) == 0 || (schema.empty() && j.contains("families"))) {
    return io::configuration_from_json(j);
  }
  if (schema.rfind("tubelab.points", 0) == 0 || (schema.empty() && j.contains("points"))) {
    return io::point_set_from_json(j);
  }
  if (schema.rfind("tubelab.values", 0) == 0 || (schema.empty() && j.contains("values"))) {
    return io::value_set_from_json(j);
  }
  if (schema.rfind("tubelab.quasi_product", 0) == 0 || (schema.empty() && j.contains("slices"))) {
    QuasiProductConfig q;
    q.qp = io::quasi_product_from_json(j);
    q.tubes = j.contains("tubes") ? io::tube_family_from_json({{"k", q.qp.scale.k}, {"tubes", j.at("tubes")}})
                                  : TubeFamily(q.qp.scale);
    return q;
  }
  throw ParseError("'" + path + "' is not a recognised tubelab document");
}

Generated source(const Options& o, GeneratorKind fallback, GeneratorSpec* used) {
  if (!o.input.empty()) return load(o.input);
  const auto spec = spec_from(o, fallback);
  if (used) *used = spec;
  return generate(spec);
}

const Configuration& need_config(const Generated& g) {
  if (const auto* c = std::get_if<Configuration>(&g)) return *c;
  throw ParseError("this command needs a configuration (points with tube families)");
}

int cmd_gen(const Options& o) {
  GeneratorSpec spec = spec_from(o, GeneratorKind::furstenberg_product);
  if (!o.input.empty()) spec = io::generator_spec_from_json(io::read_json_file(o.input));
  emit(o, io::to_json(generate(spec)));
  return 0;
}

int cmd_validate(const Options& o) {
  GeneratorSpec spec;
  const auto g = source(o, GeneratorKind::cantor_grid, &spec);
  bool pass = false;
  json out;
  if (!o.input.empty() && std::holds_alternative<PointSet>(g)) {
    const auto& P = std::get<PointSet>(g);
    const auto r = validate(P, {Scale::checked(std::min(o.k, P.scale().k)), o.s, o.C});
    pass = r.valid;
    out = io::to_json(r);
  } else if (!o.input.empty() && std::holds_alternative<ValueSet>(g)) {
    const auto& V = std::get<ValueSet>(g);
    const auto r = validate(V, {Scale::checked(std::min(o.k, V.scale().k)), o.s, o.C});
    pass = r.valid;
    out = io::to_json(r);
  } else {
    out = analyze_validate(g, o.input.empty() ? &spec : nullptr, pass);
  }
  emit(o, out);
  return pass ? 0 : 1;
}

int cmd_incidence(const Options& o) {
  const auto g = source(o, GeneratorKind::furstenberg_product, nullptr);
  bool pass = false;
  emit(o, analyze_incidence(need_config(g), pass));
  return pass ? 0 : 1;
}

int cmd_dichotomy(const Options& o) {
  const auto g = source(o, GeneratorKind::furstenberg_product, nullptr);
  bool pass = false;
  emit(o, analyze_dichotomy(need_config(g), o.slack, pass));
  return pass ? 0 : 1;
}

PointSet planar(const Generated& g) {
  if (const auto* p = std::get_if<PointSet>(&g)) return *p;
  if (const auto* c = std::get_if<Configuration>(&g)) return c->points;
  if (const auto* q = std::get_if<QuasiProductConfig>(&g)) return q->qp.to_point_set();
  if (const auto* t = std::get_if<TripodConfig>(&g)) return t->qp.to_point_set();
  throw ParseError("this command needs a planar point set");
}

int cmd_project(const Options& o) {
  const auto K = planar(source(o, GeneratorKind::cantor_grid, nullptr));
  bool pass = false;
  emit(o, analyze_sweep(K, o.s, pass));
  if (!o.csv.empty()) {
    const auto net = uniform_net(K.scale());
    const auto sw = sweep(K, net, K.scale());
    io::write_text_file(o.csv, io::sweep_csv(sw, nullptr));
  }
  return pass ? 0 : 1;
}

int cmd_additive(const Options& o) {
  const auto g = source(o, GeneratorKind::collinear_tripod, nullptr);
  if (!std::holds_alternative<QuasiProductConfig>(g) && !std::holds_alternative<TripodConfig>(g)) {
    throw ParseError("additive needs a quasi-product or a collinear tripod");
  }
  bool pass = false;
  emit(o, analyze_additive(g, pass));
  return pass ? 0 : 1;
}

int cmd_dim(const Options& o) {
  const auto g = source(o, GeneratorKind::cantor_grid, nullptr);
  std::vector<std::pair<Scale, std::uint64_t>> samples;
  if (const auto* v = std::get_if<ValueSet>(&g)) {
    for (int j = 1; j <= v->scale().k; ++j) samples.emplace_back(Scale(j), covering_number_1d(*v, Scale(j)));
  } else {
    const auto P = planar(g);
    for (int j = 1; j <= P.scale().k; ++j) samples.emplace_back(Scale(j), covering_number(P, Scale(j)));
  }
  emit(o, io::to_json(fit_exponent(samples)));
  return 0;
}

int cmd_run(const Options& o) {
  auto m = manifest_from_json(io::read_json_file(o.manifest));
  if (!o.out.empty()) m.out = o.out;
  const auto res = run(m);
  for (const auto& f : res.failed) log::warn("verdict failed: " + f);
  json summary = {{"out", m.out}, {"written", res.written}, {"failed", res.failed}, {"exit_code", res.exit_code}};
  std::cout << summary.dump(2) << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  log::init();
  CLI::App app{"tubelab: dyadic tubes, (delta, s)-sets and incidence experiments"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "OpenMP threads (outputs do not depend on it)");

  auto common = [&](CLI::App* c, bool generator) {
    c->add_option("--out", o.out, "Output file (default stdout)");
    if (!generator) c->add_option("--input", o.input, "Input JSON document");
    c->add_option("--kind", o.kind, "Generator kind when no input is given");
    c->add_option("--k", o.k, "Scale exponent, delta = 2^-k");
    c->add_option("--s", o.s, "Dimension parameter s");
    c->add_option("--tau", o.tau, "Level-set dimension tau");
    c->add_option("--seed", o.seed, "Generator seed");
    c->add_option("--n", o.n, "Tube count for collinear_tripod");
  };

  auto* gen = app.add_subcommand("gen", "Generate a configuration as JSON");
  common(gen, true);
  gen->add_option("--spec", o.input, "Generator spec JSON (overrides flags)");
  auto* val = app.add_subcommand("validate", "Check (delta, s, C)-set claims or configuration hypotheses");
  common(val, false);
  val->add_option("--C", o.C, "Constant C for input sets");
  auto* inc = app.add_subcommand("incidence", "Incidence report, Cauchy-Schwarz and pairwise bounds");
  common(inc, false);
  auto* dic = app.add_subcommand("dichotomy", "Check |T| >= delta^(-2s) or N(T, delta^1/2) >= delta^(-s)");
  common(dic, false);
  dic->add_option("--slack", o.slack, "Exponent slack");
  auto* prj = app.add_subcommand("project", "Projection sweep, exceptional directions and energy");
  common(prj, false);
  prj->add_option("--csv", o.csv, "Write per-direction counts as CSV");
  auto* add = app.add_subcommand("additive", "Slice pairs, tripod covers, Plunnecke and BSG checks");
  common(add, false);
  auto* dim = app.add_subcommand("dim", "Covering-number exponent fit across scales");
  common(dim, false);
  auto* rn = app.add_subcommand("run", "Run an experiment manifest");
  rn->add_option("manifest", o.manifest, "Manifest JSON")->required();
  rn->add_option("--out", o.out, "Override the manifest output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    kernels::set_thread_count(o.threads);
    if (*gen) return cmd_gen(o);
    if (*val) return cmd_validate(o);
    if (*inc) return cmd_incidence(o);
    if (*dic) return cmd_dichotomy(o);
    if (*prj) return cmd_project(o);
    if (*add) return cmd_additive(o);
    if (*dim) return cmd_dim(o);
    if (*rn) return cmd_run(o);
  } catch (const HypothesisError& e) {
    json w = {{"hypothesis", e.hypothesis()}, {"witness", json::parse(e.witness(), nullptr, false)}};
    std::cout << w.dump(2) << "\n";
    std::cerr << "tubelab: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "tubelab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tubelab: internal error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
