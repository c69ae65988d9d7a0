#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "tubelab/point_set.hpp"
#include "tubelab/tubes.hpp"

namespace tubelab {

// P = union over b in B of A_b x {b}. Stored in the plane as points (b, a),
// so that a tube y = alpha x + beta with alpha in [0, 1) crosses every level
// b in a window of width < 2 delta in the a-direction.
struct QuasiProduct {
  Scale scale{};
  ValueSet levels;                       // B
  std::map<std::int64_t, ValueSet> slices;  // level grid value -> A_b
  double s = 0.5;
  double tau = 0.5;

  PointSet to_point_set() const;
  const ValueSet& slice(const DyadicRational& b) const;
};

// Checks level and slice sets against (delta, tau, C) and (delta, s, C).
struct QuasiProductValidation {
  bool levels_valid = false;
  bool slices_valid = false;
  double levels_ratio = 0.0;
  double worst_slice_ratio = 0.0;
};

QuasiProductValidation validate_quasi_product(const QuasiProduct& qp, double C);

// Covering number of A + B at `target`, with exact addition.
std::uint64_t sumset_cover(const ValueSet& A, const ValueSet& B, Scale target);

// Bipartite graph on indices into A and B.
struct PairGraph {
  ValueSet A;
  ValueSet B;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  double K = 1.0;

  // |G| >= |A||B| / K
  bool eligible() const;
};

std::uint64_t restricted_sumset(const PairGraph& G, Scale target);

struct PlunneckeReport {
  std::uint64_t cover_ab = 0;   // N(A + B, delta)
  std::uint64_t cover_bb = 0;   // N(B + B, delta)
  double c0 = 0.0;              // cover_ab / |A|
  double bound = 0.0;           // c0^2 |A| F
  double size_ratio = 0.0;      // |B| / |A|
  bool holds = false;
};

// Rounding factor for the delta-discretized Plunnecke bound.
inline constexpr double kPlunneckeRounding = 4.0;

PlunneckeReport plunnecke_corollary_check(const ValueSet& A, const ValueSet& B, Scale target);

struct BsgResult {
  ValueSet A_refined;
  ValueSet B_refined;
  std::uint64_t edges_kept = 0;
  std::uint64_t sum_refined = 0;  // |A' + B'| (exact distinct sums)
  double c = 0.0;
  bool degenerate = false;  // K >= min(|A|, |B|)
  int rounds = 0;
};

// Popularity refinement: repeatedly drop vertices whose degree is below half
// the average degree of their side, until nothing changes.
BsgResult bsg_refine(const PairGraph& G);

// The four inequalities with exponent r.c, checked against G.
bool bsg_consistent(const PairGraph& G, const BsgResult& r);

// x + (b2 - b1) / (b3 - b2) * y
double tripod_projection(double x, double y, const DyadicRational& b1, const DyadicRational& b2,
                         const DyadicRational& b3);

// Pairs (a1, a3) in A_b1 x A_b3 joined by a tube of T.
struct SlicePairs {
  std::vector<std::pair<DyadicRational, DyadicRational>> pairs;
  std::size_t tubes_used = 0;
};

// Throws HypothesisError if a tube meets two points of one slice.
SlicePairs tube_slice_pairs(const QuasiProduct& qp, const TubeFamily& T, const DyadicRational& b1,
                            const DyadicRational& b3);

// Points of A_b inside tube t (at level b).
std::vector<DyadicRational> slice_hits(const QuasiProduct& qp, const DyadicTube& t, const DyadicRational& b);

// Drops tubes that meet some slice in more than one point.
TubeFamily prune_to_single_crossings(const QuasiProduct& qp, const TubeFamily& T);

// Covering number of {pi(a1, a3)} at target, with exact rational floors.
std::uint64_t tripod_image_cover(const std::vector<std::pair<DyadicRational, DyadicRational>>& pairs,
                                 const DyadicRational& b1, const DyadicRational& b2, const DyadicRational& b3,
                                 Scale target);

// |pi(a1, a3) - (b3 - b1) / (b3 - b2) a2|
double tripod_residual(const DyadicRational& a1, const DyadicRational& a2, const DyadicRational& a3,
                       const DyadicRational& b1, const DyadicRational& b2, const DyadicRational& b3);

}  // namespace tubelab
