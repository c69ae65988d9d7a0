#include "tubelab/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubelab {

namespace {

constexpr std::int64_t kKeyOffset = std::int64_t{1} << 31;

i128 floor_div_pow2(i128 v, int e) { return detail::floor_shr(v, e); }
i128 ceil_div_pow2(i128 v, int e) { return -detail::floor_shr(-v, e); }

// Smallest cell index i with i 2^-k >= v.
std::int64_t ceil_index(const DyadicRational& v, int k) {
  const std::int64_t f = v.floor_index(k);
  return DyadicRational::grid(f, k) == v ? f : f + 1;
}

}  // namespace

Line dual_line(const DyadicPoint& p) { return {p.x, p.y}; }

DyadicTube DyadicTube::from_params(Scale scale, const DyadicRational& slope, const DyadicRational& intercept) {
  if (!slope.on_grid(scale.k) || !intercept.on_grid(scale.k)) {
    throw PreconditionError("tube parameters must be multiples of 2^-" + std::to_string(scale.k));
  }
  return {scale, slope.grid_value(scale.k), intercept.grid_value(scale.k)};
}

std::uint64_t DyadicTube::key() const {
  return (static_cast<std::uint64_t>(a + kKeyOffset) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(b + kKeyOffset));
}

DyadicTube DyadicTube::from_key(Scale scale, std::uint64_t key) {
  return {scale, static_cast<std::int64_t>(key >> 32) - kKeyOffset,
          static_cast<std::int64_t>(key & 0xffffffffu) - kKeyOffset};
}

bool ParamWindow::contains(const DyadicTube& t) const {
  const auto a0 = t.slope(), b0 = t.intercept();
  const auto d = DyadicRational::grid(1, t.scale.k);
  return a_min <= a0 && a0 + d <= a_max && b_min <= b0 && b0 + d <= b_max;
}

TubeFamily TubeFamily::from(Scale scale, std::vector<DyadicTube> tubes) {
  for (const auto& t : tubes) {
    if (t.scale != scale) throw PreconditionError("tube family mixes scales");
  }
  std::sort(tubes.begin(), tubes.end());
  tubes.erase(std::unique(tubes.begin(), tubes.end()), tubes.end());
  TubeFamily f(scale);
  f.tubes_ = std::move(tubes);
  return f;
}

std::vector<std::uint64_t> TubeFamily::keys() const {
  std::vector<std::uint64_t> out;
  out.reserve(tubes_.size());
  for (const auto& t : tubes_) out.push_back(t.key());
  return out;
}

bool TubeFamily::contains(const DyadicTube& t) const {
  return std::binary_search(tubes_.begin(), tubes_.end(), t);
}

bool tube_contains(const DyadicTube& T, const DyadicPoint& p) {
  const auto a = T.slope();
  const auto b = T.intercept();
  const auto d = DyadicRational::grid(1, T.scale.k);
  if (p.x.sign() >= 0) {
    // a' x + b' ranges over [a x + b, (a + d) x + b + d).
    const auto lo = a * p.x + b;
    const auto hi = (a + d) * p.x + b + d;
    return lo <= p.y && p.y < hi;
  }
  // x < 0: ((a + d) x + b, a x + b + d), open at both ends.
  const auto lo = (a + d) * p.x + b;
  const auto hi = a * p.x + b + d;
  return lo < p.y && p.y < hi;
}

DyadicTube parent(const DyadicTube& T, Scale coarser) {
  if (coarser.k > T.scale.k) throw ScaleError("parent() needs a coarser scale");
  const int shift = T.scale.k - coarser.k;
  return {coarser, T.a >> shift, T.b >> shift};
}

TubeFamily children(const DyadicTube& T, Scale finer) {
  if (finer.k < T.scale.k) throw ScaleError("children() needs a finer scale");
  const int shift = finer.k - T.scale.k;
  if (shift > 10) throw PreconditionError("children(): more than 4^10 children requested");
  const std::int64_t n = std::int64_t{1} << shift;
  std::vector<DyadicTube> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      out.push_back({finer, (T.a << shift) + i, (T.b << shift) + j});
    }
  }
  return TubeFamily::from(finer, std::move(out));
}

bool is_ancestor(const DyadicTube& outer, const DyadicTube& inner) {
  return inner.scale.k >= outer.scale.k && parent(inner, outer.scale) == outer;
}

TubeFamily tubes_through(const DyadicPoint& p, Scale scale, const ParamWindow& window) {
  if (window.empty()) throw PreconditionError("tubes_through: empty parameter window");
  const auto bound = DyadicRational::integer(kCoordBound);
  if (p.x.abs() > bound || p.y.abs() > bound) throw RangeError("tubes_through: point outside [-4,4]^2");
  const int k = scale.k;
  const int e = std::max(p.x.exponent(), p.y.exponent());
  const i128 X = detail::shl_checked(p.x.numerator(), e - p.x.exponent());
  const i128 Yk = detail::shl_checked(detail::shl_checked(p.y.numerator(), e - p.y.exponent()), k);

  const std::int64_t i_lo = ceil_index(window.a_min, k);
  const std::int64_t i_hi = window.a_max.floor_index(k) - 1;
  const std::int64_t j_min = ceil_index(window.b_min, k);
  const std::int64_t j_max = window.b_max.floor_index(k) - 1;

  std::vector<DyadicTube> out;
  for (std::int64_t i = i_lo; i <= i_hi; ++i) {
    i128 lo, hi;
    if (X >= 0) {
      // i X + j 2^e <= Y 2^k < (i+1) X + (j+1) 2^e
      lo = floor_div_pow2(Yk - (i + 1) * X, e);
      hi = floor_div_pow2(Yk - i * X, e);
    } else {
      // (i+1) X + j 2^e < Y 2^k < i X + (j+1) 2^e
      lo = floor_div_pow2(Yk - i * X, e);
      hi = ceil_div_pow2(Yk - (i + 1) * X, e) - 1;
    }
    lo = std::max<i128>(lo, j_min);
    hi = std::min<i128>(hi, j_max);
    for (i128 j = lo; j <= hi; ++j) out.push_back({scale, i, static_cast<std::int64_t>(j)});
  }
  return TubeFamily::from(scale, std::move(out));
}

std::vector<DyadicRational> slope_set(const TubeFamily& F) {
  std::vector<DyadicRational> out;
  for (const auto& t : F) {
    if (out.empty() || !(out.back() == t.slope())) out.push_back(t.slope());  // sorted by a
  }
  return out;
}

ValueSet slope_values(const TubeFamily& F) {
  std::vector<std::int64_t> v;
  v.reserve(F.size());
  for (const auto& t : F) v.push_back(t.a);
  return ValueSet::from_grid(F.scale(), std::move(v));
}

TubeFamily children_in_family(const DyadicTube& T0, const TubeFamily& F) {
  if (F.scale().k <= T0.scale.k) throw PreconditionError("children_in_family: family must be finer than T0");
  std::vector<DyadicTube> out;
  for (const auto& t : F) {
    if (parent(t, T0.scale) == T0) out.push_back(t);
  }
  return TubeFamily::from(F.scale(), std::move(out));
}

TubeFamily cover_by_coarse_tubes(const TubeFamily& F, const PointSet& P, const DyadicRational& a2,
                                 Scale coarse, const TubeFamily& M_cover) {
  if (!a2.on_grid(coarse.k)) throw PreconditionError("cover: slope a2 is not a multiple of delta2");
  const std::int64_t a_idx = a2.grid_value(coarse.k);
  if (!M_cover.empty() && M_cover.scale() != coarse) throw PreconditionError("cover: M_cover is not at the coarse scale");
  for (const auto& t : M_cover) {
    if (t.a != a_idx) throw PreconditionError("cover: M_cover tube with slope other than a2");
  }
  const auto points = P.points();
  const auto one = DyadicRational::integer(1);
  for (const auto& p : points) {
    if (p.x.abs() > one) throw PreconditionError("cover: point " + p.x.to_string() + "," + p.y.to_string() + " has |x| > 1");
    const bool covered = std::any_of(M_cover.begin(), M_cover.end(), [&](const DyadicTube& t) { return tube_contains(t, p); });
    if (!covered) throw PreconditionError("cover: point " + p.x.to_string() + "," + p.y.to_string() + " not covered by M_cover");
  }
  if (!F.empty()) {
    if (F.scale().k < coarse.k) throw PreconditionError("cover: F must be at a scale no coarser than delta2");
    for (const auto& t : F) {
      if (parent(t, coarse).a != a_idx) throw PreconditionError("cover: fine tube slope outside [a2, a2 + delta2)");
      const bool meets = std::any_of(points.begin(), points.end(), [&](const DyadicPoint& p) { return tube_contains(t, p); });
      if (!meets) throw PreconditionError("cover: fine tube does not meet P");
    }
  }
  if (F.empty()) return TubeFamily(coarse);

  std::vector<DyadicTube> out;
  out.reserve(M_cover.size() * kCoverFanout);
  for (const auto& t : M_cover) {
    for (std::int64_t m = -5; m <= 5; ++m) out.push_back({coarse, a_idx, t.b + m});
  }
  auto cover = TubeFamily::from(coarse, std::move(out));
  for (const auto& t : F) {
    if (!cover.contains(parent(t, coarse))) throw std::logic_error("cover_by_coarse_tubes: fine tube left uncovered");
  }
  return cover;
}

bool OrdinaryTube::contains(double x, double y) const {
  const double dist = -std::sin(angle) * x + std::cos(angle) * y - offset;
  return std::abs(dist) <= 0.5 * width;
}

double ordinary_width_constant(double R) { return R + 2.0; }

OrdinaryTube to_ordinary(const DyadicTube& T, double R) {
  const double delta = T.scale.delta();
  const double slope = T.slope().to_double() + 0.5 * delta;
  const double intercept = T.intercept().to_double() + 0.5 * delta;
  const double angle = std::atan(slope);
  return {angle, intercept * std::cos(angle), ordinary_width_constant(R) * delta};
}

}  // namespace tubelab
