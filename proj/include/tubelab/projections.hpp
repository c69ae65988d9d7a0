#pragma once

#include <cstdint>
#include <vector>

#include "tubelab/delta_sets.hpp"
#include "tubelab/point_set.hpp"

namespace tubelab {

// Directions as angles in [0, pi); pi_e(x, y) = x cos e + y sin e.
struct DirectionNet {
  Scale scale{};
  std::vector<double> angles;
  std::vector<double> weights;  // optional, empty or one per angle
};

// Angles j * delta for 0 <= j delta < pi.
DirectionNet uniform_net(Scale scale);
// Angles span * v for v in `values` (values in [0, 1)).
DirectionNet net_from_values(const ValueSet& values, double span);

// Validates the net as a 1-d set: angles must be pairwise >= delta apart;
// they are snapped to their delta-cells and checked with delta_sets::validate.
ValidationReport validate_net(const DirectionNet& net, double t, double C);

// Slope a of the line direction (1, a) versus its angle; bi-Lipschitz away from vertical.
double angle_of_slope(double slope);
double slope_of_angle(double angle);

std::vector<double> project(const PointSet& K, double angle);

struct ProjectionSweep {
  Scale target{};
  std::vector<double> angles;
  std::vector<std::uint64_t> counts;  // N(pi_e(K), delta) per angle
  std::size_t source_size = 0;
};

ProjectionSweep sweep(const PointSet& K, const DirectionNet& net, Scale target, double offset = 0.0);

struct SweepSummary {
  std::uint64_t min = 0;
  std::uint64_t q25 = 0;
  std::uint64_t median = 0;
  std::uint64_t q75 = 0;
  std::uint64_t max = 0;
};

// Nearest-rank quantiles of the counts.
SweepSummary summarize(const ProjectionSweep& sw);

// Recount with the grid shifted by `jitter`; reports how many directions change
// and by how much at most.
struct BoundaryAudit {
  std::size_t changed = 0;
  std::uint64_t max_difference = 0;
};

BoundaryAudit boundary_audit(const PointSet& K, const DirectionNet& net, Scale target, double jitter);

// Directions with N(pi_e(K), delta) <= delta^-t.
DirectionNet exceptional_set(const ProjectionSweep& sw, double t);

// count / (ln(1/delta)^2 delta^-t): the constant in the Kaufman-type bound.
double kaufman_constant(std::size_t exceptional_count, Scale target, double t);

struct EnergySweep {
  std::vector<double> angles;
  std::vector<double> energy;  // I_s(e) per angle
  double average = 0.0;
};

// I_s(e) = |P|^-2 sum_{p != q} min(delta^-s, |pi_e p - pi_e q|^-s), delta = P.scale().
EnergySweep projection_energy(const PointSet& P, const DirectionNet& net, double s);

// Spearman rank correlation of two equally long samples (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tubelab
