#include "tubelab/covering.hpp"

#include <algorithm>
#include <cmath>

#include "tubelab/kernels.hpp"

namespace tubelab {

std::uint64_t covering_number(const PointSet& F, Scale target) {
  if (target.k > F.scale().k) {
    throw ScaleError("covering scale 2^-" + std::to_string(target.k) +
                     " is finer than the data resolution 2^-" + std::to_string(F.scale().k));
  }
  const int shift = F.scale().k - target.k;
  std::vector<GridPoint> cells;
  cells.reserve(F.size());
  for (const auto& p : F.grid()) cells.push_back({p.x >> shift, p.y >> shift});
  std::sort(cells.begin(), cells.end());
  return static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

std::uint64_t covering_number_1d(std::span<const DyadicRational> F, Scale target) {
  const auto lo = DyadicRational::integer(-kValueBound);
  const auto hi = DyadicRational::integer(kValueBound);
  std::vector<std::int64_t> cells;
  cells.reserve(F.size());
  for (const auto& v : F) {
    if (v < lo || v > hi) throw RangeError("value " + v.to_string() + " outside [-8, 8]");
    cells.push_back(v.floor_index(target.k));
  }
  std::sort(cells.begin(), cells.end());
  return static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

std::uint64_t covering_number_1d(const ValueSet& F, Scale target) {
  if (target.k > F.scale().k) throw ScaleError("covering scale finer than data resolution");
  const int shift = F.scale().k - target.k;
  std::uint64_t count = 0;
  std::int64_t last = 0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const std::int64_t cell = F.grid()[i] >> shift;  // values are sorted
    if (i == 0 || cell != last) ++count;
    last = cell;
  }
  return count;
}

ExponentFit fit_exponent(std::span<const std::pair<Scale, std::uint64_t>> samples) {
  if (samples.size() < 2) throw PreconditionError("fit_exponent needs at least 2 samples");
  ExponentFit fit;
  double mx = 0.0, my = 0.0;
  std::vector<double> ys;
  for (const auto& [scale, count] : samples) {
    if (count < 1) throw PreconditionError("fit_exponent needs counts >= 1");
    fit.samples.emplace_back(scale.k, count);
    ys.push_back(std::log2(static_cast<double>(count)));
    mx += scale.k;
    my += ys.back();
  }
  const double n = static_cast<double>(samples.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double dx = samples[i].first.k - mx;
    sxx += dx * dx;
    sxy += dx * (ys[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("fit_exponent needs at least two distinct scales");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = std::abs(ys[i] - (fit.slope * samples[i].first.k + fit.intercept));
    fit.residual = std::max(fit.residual, r);
  }
  return fit;
}

double energy_sum(const PointSet& P, double t) {
  if (P.size() < 2) throw PreconditionError("energy_sum needs at least 2 points");
  return kernels::parallel::energy_sum(P.grid(), P.scale().k, t);
}

}  // namespace tubelab
