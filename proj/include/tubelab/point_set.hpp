#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tubelab/dyadic.hpp"

namespace tubelab {

// Coordinates in units of 2^-k for the owning set's scale.
struct GridPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

// Points live in [-kCoordBound, kCoordBound]^2; 1-d value sets in [-kValueBound, kValueBound].
inline constexpr std::int64_t kCoordBound = 4;
inline constexpr std::int64_t kValueBound = 8;

// Finite planar set resolved on the 2^-k grid. Points are pairwise distinct,
// so the set is automatically delta-separated. Order is preserved because
// configurations refer to points by index.
class PointSet {
 public:
  PointSet() = default;

  static PointSet from_grid(Scale scale, std::vector<GridPoint> points);
  static PointSet from_points(Scale scale, std::span<const DyadicPoint> points);

  Scale scale() const { return scale_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  std::span<const GridPoint> grid() const { return pts_; }
  const GridPoint& grid(std::size_t i) const { return pts_[i]; }
  DyadicPoint point(std::size_t i) const;
  std::vector<DyadicPoint> points() const;

  // Certified lower bound on pairwise distance (delta, since points are distinct grid points).
  DyadicRational separation() const { return DyadicRational::grid(1, scale_.k); }

  // Same points re-expressed on a finer grid.
  PointSet refined(Scale finer) const;

 private:
  Scale scale_{};
  std::vector<GridPoint> pts_;
};

// Finite subset of the line resolved on the 2^-k grid, sorted and deduplicated.
class ValueSet {
 public:
  ValueSet() = default;

  static ValueSet from_grid(Scale scale, std::vector<std::int64_t> values);
  static ValueSet from_values(Scale scale, std::span<const DyadicRational> values);

  Scale scale() const { return scale_; }
  std::size_t size() const { return vals_.size(); }
  bool empty() const { return vals_.empty(); }
  std::span<const std::int64_t> grid() const { return vals_; }
  DyadicRational value(std::size_t i) const { return DyadicRational::grid(vals_[i], scale_.k); }
  std::vector<DyadicRational> values() const;

 private:
  Scale scale_{};
  std::vector<std::int64_t> vals_;
};

}  // namespace tubelab
