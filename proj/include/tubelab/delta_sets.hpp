#pragma once

#include <cstdint>

#include "tubelab/point_set.hpp"

namespace tubelab {

struct DeltaSetParams {
  Scale scale{};
  double s = 1.0;
  double C = 1.0;
};

// Outcome of checking |P ∩ B(x, r)| <= C (r / delta)^s over data centres x and
// dyadic radii delta <= r <= 1.
struct ValidationReport {
  bool valid = true;
  double worst_ratio = 0.0;  // max |P ∩ B(x,r)| / (C (r/delta)^s)
  int dimension = 2;
  DyadicPoint witness_center;  // y unused for 1-d sets
  DyadicRational witness_radius;
  std::uint64_t witness_count = 0;
  // Data centres weaken the all-centre condition by at most 2^s: a set valid
  // here is valid for arbitrary centres with this constant (radii <= 1/2).
  double effective_constant = 0.0;
  DeltaSetParams params;
  std::size_t size = 0;
};

ValidationReport validate(const PointSet& P, const DeltaSetParams& params);
ValidationReport validate(const ValueSet& P, const DeltaSetParams& params);

// Minimal sum of side^s over covers by dyadic cells with delta <= side <= 1.
struct DiscreteContent {
  double value = 0.0;
  Scale scale{};
};

DiscreteContent discrete_content(const PointSet& B, double s);
DiscreteContent discrete_content(const ValueSet& B, double s);

struct Extraction {
  PointSet points;
  double constant = 0.0;     // C' with which `points` passes validate (3^d)
  double cardinality = 0.5;  // c in |points| >= c * kappa * delta^-s
  double kappa = 0.0;
};

struct Extraction1d {
  ValueSet values;
  double constant = 0.0;
  double cardinality = 0.5;
  double kappa = 0.0;
};

// Dyadic Frostman selection: one point per delta-cell, then every cell of side
// l is trimmed to floor((l / delta)^s) points, removing from the fullest child
// first. Requires params.scale == B.scale().
Extraction extract(const PointSet& B, const DeltaSetParams& params);
Extraction1d extract(const ValueSet& B, const DeltaSetParams& params);

}  // namespace tubelab
