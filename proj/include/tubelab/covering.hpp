#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tubelab/point_set.hpp"

namespace tubelab {

// Number of half-open dyadic cells of side 2^-target.k meeting F. This is the
// cell proxy for the ball covering number: N_cells/4 <= N_balls <= 4 N_cells.
std::uint64_t covering_number(const PointSet& F, Scale target);

// Number of half-open dyadic intervals of length 2^-target.k meeting F.
std::uint64_t covering_number_1d(std::span<const DyadicRational> F, Scale target);
std::uint64_t covering_number_1d(const ValueSet& F, Scale target);

struct ExponentFit {
  std::vector<std::pair<int, std::uint64_t>> samples;  // (k, count)
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log2(count) - (slope k + intercept)|
};

// Least-squares slope of log2(count) against k.
ExponentFit fit_exponent(std::span<const std::pair<Scale, std::uint64_t>> samples);

// Sum over ordered pairs p != q of |p - q|^-t.
double energy_sum(const PointSet& P, double t);

}  // namespace tubelab
