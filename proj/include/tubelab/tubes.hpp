#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "tubelab/point_set.hpp"

namespace tubelab {

// The non-vertical line y = slope * x + intercept.
struct Line {
  DyadicRational slope;
  DyadicRational intercept;

  bool contains(const DyadicPoint& p) const { return p.y == slope * p.x + intercept; }
};

// Point-line duality: (a, b) -> {y = a x + b}.
Line dual_line(const DyadicPoint& p);

// Dyadic tube D(Q) for the parameter square
// Q = [a 2^-k, (a+1) 2^-k) x [b 2^-k, (b+1) 2^-k); a and b are cell indices.
struct DyadicTube {
  Scale scale{};
  std::int64_t a = 0;
  std::int64_t b = 0;

  static DyadicTube from_params(Scale scale, const DyadicRational& slope, const DyadicRational& intercept);

  DyadicRational slope() const { return DyadicRational::grid(a, scale.k); }
  DyadicRational intercept() const { return DyadicRational::grid(b, scale.k); }

  // Packed (a, b); ordering of keys matches lexicographic (a, b) order.
  std::uint64_t key() const;
  static DyadicTube from_key(Scale scale, std::uint64_t key);

  friend auto operator<=>(const DyadicTube&, const DyadicTube&) = default;
};

// Admissible parameter region [a_min, a_max) x [b_min, b_max); only tubes whose
// parameter square lies inside are enumerated.
struct ParamWindow {
  DyadicRational a_min = DyadicRational::integer(0);
  DyadicRational a_max = DyadicRational::integer(1);
  DyadicRational b_min = DyadicRational::integer(0);
  DyadicRational b_max = DyadicRational::integer(1);

  static ParamWindow unit() { return {}; }
  bool empty() const { return !(a_min < a_max) || !(b_min < b_max); }
  bool contains(const DyadicTube& t) const;

  friend bool operator==(const ParamWindow&, const ParamWindow&) = default;
};

// Deduplicated single-scale collection, kept sorted by key.
class TubeFamily {
 public:
  TubeFamily() = default;
  explicit TubeFamily(Scale scale) : scale_(scale) {}
  static TubeFamily from(Scale scale, std::vector<DyadicTube> tubes);

  Scale scale() const { return scale_; }
  std::size_t size() const { return tubes_.size(); }
  bool empty() const { return tubes_.empty(); }
  std::span<const DyadicTube> tubes() const { return tubes_; }
  std::vector<std::uint64_t> keys() const;
  bool contains(const DyadicTube& t) const;

  auto begin() const { return tubes_.begin(); }
  auto end() const { return tubes_.end(); }

 private:
  Scale scale_{};
  std::vector<DyadicTube> tubes_;
};

// Exact membership p ∈ D(Q).
bool tube_contains(const DyadicTube& T, const DyadicPoint& p);

DyadicTube parent(const DyadicTube& T, Scale coarser);
TubeFamily children(const DyadicTube& T, Scale finer);
// Parameter-square containment; equivalent to point-set containment of the tubes.
bool is_ancestor(const DyadicTube& outer, const DyadicTube& inner);

// All tubes at `scale` with parameter square inside `window` that contain p.
TubeFamily tubes_through(const DyadicPoint& p, Scale scale, const ParamWindow& window = ParamWindow::unit());

std::vector<DyadicRational> slope_set(const TubeFamily& F);
// Slope set as grid values at the family's scale.
ValueSet slope_values(const TubeFamily& F);

// Members of F whose parameter square lies inside T0's.
TubeFamily children_in_family(const DyadicTube& T0, const TubeFamily& F);

// Coarse tubes of slope a2 within five coarse cells (in intercept) of a member
// of M_cover. Covers every tube of F when the preconditions hold: F consists of
// fine tubes with slope in [a2, a2 + delta2) meeting P, every point of P has
// |x| <= 1 and lies in some tube of M_cover.
TubeFamily cover_by_coarse_tubes(const TubeFamily& F, const PointSet& P, const DyadicRational& a2,
                                 Scale coarse, const TubeFamily& M_cover);
inline constexpr std::size_t kCoverFanout = 11;

// Closed (width/2)-neighbourhood of the line through (0, offset / cos(angle))
// with direction angle `angle`. Floating point, diagnostics only.
struct OrdinaryTube {
  double angle = 0.0;
  double offset = 0.0;
  double width = 0.0;

  bool contains(double x, double y) const;
};

// C_R used by to_ordinary.
double ordinary_width_constant(double R);
// An ordinary tube of width C_R * delta around the centre line of D(Q) that
// contains D(Q) ∩ B(0, R).
OrdinaryTube to_ordinary(const DyadicTube& T, double R);

}  // namespace tubelab
