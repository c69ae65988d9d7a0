#pragma once

// Hot loops, in two flavours. `serial` holds the straightforward reference
// implementations kept for testing; `parallel` holds the OpenMP versions used
// by the library. Parallel kernels return bit-identical results for any
// thread count: integer outputs are exact, and floating-point sums are formed
// per row and combined with a fixed pairwise tree.

#include <cstdint>
#include <span>
#include <vector>

#include "tubelab/point_set.hpp"

namespace tubelab::kernels {

// Half-open cell of a floating projection value. Values within kBoundaryTol of
// a cell boundary fall in the lower cell.
inline constexpr double kBoundaryTol = 0x1p-40;
std::int64_t float_cell(double v, double delta, double offset = 0.0);

// Sum of v in a fixed balanced tree order.
double pairwise_sum(std::span<const double> v);

struct PairCount {
  std::uint32_t p = 0;
  std::uint32_t q = 0;
  std::uint32_t count = 0;

  friend bool operator==(const PairCount&, const PairCount&) = default;
};

namespace serial {

// Sum over ordered pairs p != q of |p - q|^-t.
double energy_sum(std::span<const GridPoint> pts, int k, double t);

// Row-major n x (max_level + 1): entry (i, j) = |{q : |p_i - q| <= 2^-j}|.
std::vector<std::uint32_t> ball_counts(std::span<const GridPoint> pts, int k, int max_level);
std::vector<std::uint32_t> ball_counts_1d(std::span<const std::int64_t> vals, int k, int max_level);

// Covering number at 2^-target_k of pi_e(pts) for each angle e.
std::vector<std::uint64_t> projection_counts(std::span<const GridPoint> pts, int k,
                                             std::span<const double> angles, int target_k,
                                             double offset = 0.0);

// |P|^-2 sum_{p != q} min(delta^-s, |pi_e p - pi_e q|^-s) for each angle e.
std::vector<double> projection_energy(std::span<const GridPoint> pts, int k,
                                      std::span<const double> angles, double s);

// |F_p ∩ F_q| for all p < q with nonzero intersection. Families hold sorted keys.
std::vector<PairCount> pair_intersections(std::span<const std::vector<std::uint64_t>> families);

}  // namespace serial

namespace parallel {

double energy_sum(std::span<const GridPoint> pts, int k, double t);
std::vector<std::uint32_t> ball_counts(std::span<const GridPoint> pts, int k, int max_level);
std::vector<std::uint32_t> ball_counts_1d(std::span<const std::int64_t> vals, int k, int max_level);
std::vector<std::uint64_t> projection_counts(std::span<const GridPoint> pts, int k,
                                             std::span<const double> angles, int target_k,
                                             double offset = 0.0);
std::vector<double> projection_energy(std::span<const GridPoint> pts, int k,
                                      std::span<const double> angles, double s);
std::vector<PairCount> pair_intersections(std::span<const std::vector<std::uint64_t>> families);

}  // namespace parallel

// Sets the OpenMP team size used by the parallel kernels (<= 0 keeps the default).
void set_thread_count(int threads);

}  // namespace tubelab::kernels
