#include "tubelab/point_set.hpp"

#include <algorithm>

namespace tubelab {

namespace {

void check_coord(std::int64_t v, int k, std::int64_t bound) {
  const std::int64_t lim = bound << k;
  if (v < -lim || v > lim) {
    throw RangeError("coordinate " + DyadicRational::grid(v, k).to_string() + " outside [-" +
                     std::to_string(bound) + ", " + std::to_string(bound) + "]");
  }
}

}  // namespace

PointSet PointSet::from_grid(Scale scale, std::vector<GridPoint> points) {
  Scale::checked(scale.k);
  for (const auto& p : points) {
    check_coord(p.x, scale.k, kCoordBound);
    check_coord(p.y, scale.k, kCoordBound);
  }
  std::vector<GridPoint> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionError("point set contains duplicate points");
  }
  PointSet out;
  out.scale_ = scale;
  out.pts_ = std::move(points);
  return out;
}

PointSet PointSet::from_points(Scale scale, std::span<const DyadicPoint> points) {
  std::vector<GridPoint> g;
  g.reserve(points.size());
  for (const auto& p : points) {
    g.push_back({p.x.grid_value(scale.k), p.y.grid_value(scale.k)});
  }
  return from_grid(scale, std::move(g));
}

DyadicPoint PointSet::point(std::size_t i) const {
  return {DyadicRational::grid(pts_[i].x, scale_.k), DyadicRational::grid(pts_[i].y, scale_.k)};
}

std::vector<DyadicPoint> PointSet::points() const {
  std::vector<DyadicPoint> out;
  out.reserve(pts_.size());
  for (std::size_t i = 0; i < pts_.size(); ++i) out.push_back(point(i));
  return out;
}

PointSet PointSet::refined(Scale finer) const {
  if (finer.k < scale_.k) throw ScaleError("refined() needs a finer scale");
  const int shift = finer.k - scale_.k;
  std::vector<GridPoint> g;
  g.reserve(pts_.size());
  for (const auto& p : pts_) g.push_back({p.x << shift, p.y << shift});
  return from_grid(finer, std::move(g));
}

ValueSet ValueSet::from_grid(Scale scale, std::vector<std::int64_t> values) {
  Scale::checked(scale.k);
  for (auto v : values) check_coord(v, scale.k, kValueBound);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  ValueSet out;
  out.scale_ = scale;
  out.vals_ = std::move(values);
  return out;
}

ValueSet ValueSet::from_values(Scale scale, std::span<const DyadicRational> values) {
  std::vector<std::int64_t> g;
  g.reserve(values.size());
  for (const auto& v : values) g.push_back(v.grid_value(scale.k));
  return from_grid(scale, std::move(g));
}

std::vector<DyadicRational> ValueSet::values() const {
  std::vector<DyadicRational> out;
  out.reserve(vals_.size());
  for (auto v : vals_) out.push_back(DyadicRational::grid(v, scale_.k));
  return out;
}

}  // namespace tubelab
