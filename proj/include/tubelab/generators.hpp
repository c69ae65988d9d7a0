#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tubelab/additive.hpp"
#include "tubelab/incidence.hpp"
#include "tubelab/point_set.hpp"
#include "tubelab/tubes.hpp"

namespace tubelab {

// 64-bit linear congruential generator, x <- x * 6364136223846793005 + 1442695040888963407.
// Draws use the high 31 bits of the new state.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform-ish integer in [0, n), n < 2^31.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

// Cell counts per level: n_0 = 1, n_j = min(max(1, floor(2^(j s))), 2 n_{j-1}).
std::vector<std::uint64_t> cantor_counts(int k, double s);
// Digit-restricted subset of [0, 1) at scale k with cantor_counts(k, s) cells per
// level. The n_j - n_{j-1} doublings at level j are spread evenly over the kept
// parents; a parent that does not double keeps its left child.
ValueSet cantor_line(int k, double s);
PointSet cantor_grid(int k, double s);
// All 4^k grid points of [0, 1)^2.
PointSet full_grid(int k);

// Points spread one coarse cell per coarse column of [0, 1/2) x [1/2, 3/4),
// each cell holding a permutation pattern of fine points; T_p holds, for each
// slope of cantor_line(k, s), the tube of that slope through p. epsilon is set
// to the smallest value satisfying the incidence hypotheses.
Configuration furstenberg_product(int k, double s, std::uint64_t seed);

struct QuasiProductConfig {
  QuasiProduct qp;
  TubeFamily tubes;
};

// Levels B = cantor_line(k, tau); A_b = cantor_line(k - 2, s) on the delta grid
// (spacing >= 4 delta), translated mod 1 by a level-dependent multiple of 4 delta.
// Tubes: every tube through a point with slope in cantor_line(k, s) and
// intercept in [-1, 1).
QuasiProductConfig quasi_product_config(int k, double s, double tau, std::uint64_t seed);

struct TripodConfig {
  QuasiProduct qp;
  TubeFamily tubes;
  std::vector<std::array<DyadicRational, 3>> triples;  // (a1, a2, a3) per tube, in tube order
  std::array<DyadicRational, 3> levels;
};

// n tubes with distinct slope cells, each threaded through one point per level
// (a = delta * ceil((alpha b + beta) / delta)); tubes whose points come within
// 3 delta of an earlier point are redrawn.
TripodConfig collinear_tripod(int k, const std::array<DyadicRational, 3>& levels, std::size_t n,
                              std::uint64_t seed);

enum class GeneratorKind { grid, cantor_grid, quasi_product, furstenberg_product, slope_net, collinear_tripod };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::furstenberg_product;
  int k = 8;
  double s = 0.5;
  double tau = 0.5;
  std::uint64_t seed = 1;
  std::array<DyadicRational, 3> levels{DyadicRational::integer(0), DyadicRational(1, 1), DyadicRational(3, 2)};
  std::size_t n = 16;
};

std::string to_string(GeneratorKind kind);
// Throws ParseError for an unknown name.
GeneratorKind generator_kind(const std::string& name);

// Throws PreconditionError when parameters do not suit the kind.
void check_spec(const GeneratorSpec& spec);

using Generated = std::variant<PointSet, Configuration, QuasiProductConfig, ValueSet, TripodConfig>;
Generated generate(const GeneratorSpec& spec);

}  // namespace tubelab
