#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tubelab/generators.hpp"
#include "tubelab/serialize.hpp"

namespace tubelab {

enum class Analysis { validate, incidence, dichotomy, sweep, additive };

std::string to_string(Analysis a);
Analysis analysis_from_string(const std::string& name);

struct ExperimentManifest {
  std::optional<GeneratorSpec> spec;  // either a generator spec ...
  std::string input;                  // ... or a configuration file
  std::vector<int> k_range;
  std::vector<Analysis> analyses;
  double slack = 0.2;
  std::string out;

  bool wants(Analysis a) const;
};

// Shape and constraint checks (ParseError): exactly one source, non-empty
// analyses, even k whenever a delta^1/2 analysis is requested, analyses that
// fit the generated object.
ExperimentManifest manifest_from_json(const io::json& j);
io::json to_json(const ExperimentManifest& m);
// FNV-1a of the compact manifest JSON without "out", as 16 hex digits.
std::string manifest_hash(const ExperimentManifest& m);

struct RunResult {
  int exit_code = 0;  // 0 all verdicts pass, 1 some verdict failed
  std::vector<std::string> failed;  // "k=10 dichotomy" style labels
  std::vector<std::string> written;  // files, relative to out
};

// Writes report_k<k>.json per k, aggregate.csv, fit.json and metadata.json
// (the only file with a timestamp) into m.out.
RunResult run(const ExperimentManifest& m);

// Per-object analyses shared by the CLI subcommands and run(); each returns the
// JSON report and sets `pass`.
io::json analyze_validate(const Generated& g, const GeneratorSpec* spec, bool& pass);
io::json analyze_incidence(const Configuration& cfg, bool& pass);
io::json analyze_dichotomy(const Configuration& cfg, double slack, bool& pass);
io::json analyze_sweep(const PointSet& K, double s, bool& pass);
io::json analyze_additive(const Generated& g, bool& pass);

// Claimed (delta, s, C) constants for generator outputs.
inline constexpr double kCantorLineConstant = 4.0;
inline constexpr double kCantorGridConstant = 16.0;
inline constexpr double kSliceConstant = 8.0;
inline constexpr double kKaufmanConstantLimit = 64.0;
inline constexpr double kTripodResidualLimit = 16.0;  // in units of delta

}  // namespace tubelab
