#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "tubelab/additive.hpp"
#include "tubelab/covering.hpp"
#include "tubelab/delta_sets.hpp"
#include "tubelab/generators.hpp"
#include "tubelab/incidence.hpp"
#include "tubelab/projections.hpp"

namespace tubelab::io {

using nlohmann::json;

// Points and tubes are written as [num, exp, num, exp] and set values as
// [num, exp] (value = num / 2^exp). Report fields use the string "n/2^e".
// Readers also accept [x, y] pairs of JSON numbers or strings "n/2^e", "n/d"
// or finite decimals, provided the value is dyadic.
json to_json(const DyadicRational& v);
DyadicRational dyadic_from_json(const json& j);
DyadicRational parse_dyadic(const std::string& text);

json to_json(const PointSet& P);
PointSet point_set_from_json(const json& j);
json to_json(const ValueSet& V);
ValueSet value_set_from_json(const json& j);
json to_json(const TubeFamily& F);
TubeFamily tube_family_from_json(const json& j);

json to_json(const Configuration& cfg);
Configuration configuration_from_json(const json& j);
json to_json(const QuasiProduct& qp, const TubeFamily* tubes = nullptr);
QuasiProduct quasi_product_from_json(const json& j);
json to_json(const TripodConfig& t);
json to_json(const Generated& g);

json to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const json& j);

json to_json(const ValidationReport& r);
json to_json(const IncidenceReport& r);
json to_json(const DichotomyVerdict& v);
json to_json(const CauchySchwarzReport& r);
json to_json(const PairwiseBoundReport& r);
json to_json(const CoarseEnergyReport& r);
json to_json(const AuxLemmaReport& r);
json to_json(const HypothesisReport& r);
json to_json(const ExponentFit& f);
json to_json(const SweepSummary& s);
json to_json(const PlunneckeReport& r);
json to_json(const BsgResult& r);

// Reads a whole file and parses it; ParseError on failure.
json read_json_file(const std::string& path);
// Writes j.dump(2) followed by a newline.
void write_json_file(const std::string& path, const json& j);
void write_text_file(const std::string& path, const std::string& text);

inline constexpr const char* kCsvSchema = "tubelab.aggregate/1";
inline constexpr const char* kSweepCsvSchema = "tubelab.sweep/1";
inline constexpr const char* kPairsCsvSchema = "tubelab.pairs/1";

// Aggregate CSV: "# schema: tubelab.aggregate/1" then the header row.
std::string aggregate_csv_header();
std::string aggregate_csv_row(const IncidenceReport& r, const std::string& verdicts);
std::string sweep_csv(const ProjectionSweep& sw, const EnergySweep* energy);
std::string pairs_csv(const SlicePairs& pairs);

// Shortest round-trip decimal for a double, as used in CSV cells.
std::string format_double(double v);

}  // namespace tubelab::io
