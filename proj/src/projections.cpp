#include "tubelab/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tubelab/errors.hpp"
#include "tubelab/kernels.hpp"

namespace tubelab {

DirectionNet uniform_net(Scale scale) {
  DirectionNet net{scale, {}, {}};
  const double d = scale.delta();
  for (std::int64_t j = 0; j * d < std::numbers::pi; ++j) net.angles.push_back(j * d);
  return net;
}

DirectionNet net_from_values(const ValueSet& values, double span) {
  DirectionNet net{values.scale(), {}, {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values.value(i).to_double();
    if (v < 0.0 || v >= 1.0) throw RangeError("direction parameters must lie in [0, 1)");
    net.angles.push_back(span * v);
  }
  return net;
}

ValidationReport validate_net(const DirectionNet& net, double t, double C) {
  if (net.angles.empty()) throw PreconditionError("empty direction net");
  std::vector<double> a = net.angles;
  std::sort(a.begin(), a.end());
  const double d = net.scale.delta();
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] - a[i - 1] < d * (1.0 - 1e-12)) throw PreconditionError("direction net is not delta-separated");
  }
  std::vector<std::int64_t> cells;
  for (double v : a) cells.push_back(kernels::float_cell(v, d));
  return validate(ValueSet::from_grid(net.scale, std::move(cells)), {net.scale, t, C});
}

double angle_of_slope(double slope) { return std::atan(slope); }
double slope_of_angle(double angle) { return std::tan(angle); }

std::vector<double> project(const PointSet& K, double angle) {
  const double unit = std::ldexp(1.0, -K.scale().k);
  const double c = std::cos(angle), s = std::sin(angle);
  std::vector<double> out;
  out.reserve(K.size());
  for (const auto& g : K.grid()) out.push_back((g.x * c + g.y * s) * unit);
  return out;
}

ProjectionSweep sweep(const PointSet& K, const DirectionNet& net, Scale target, double offset) {
  if (net.angles.empty()) throw PreconditionError("sweep needs a nonempty direction net");
  if (K.empty()) throw PreconditionError("sweep needs a nonempty set");
  ProjectionSweep sw;
  sw.target = target;
  sw.angles = net.angles;
  sw.source_size = K.size();
  sw.counts = kernels::parallel::projection_counts(K.grid(), K.scale().k, net.angles, target.k, offset);
  return sw;
}

SweepSummary summarize(const ProjectionSweep& sw) {
  if (sw.counts.empty()) throw PreconditionError("empty sweep");
  auto c = sw.counts;
  std::sort(c.begin(), c.end());
  auto rank = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * c.size()));
    return c[std::min(c.size() - 1, idx == 0 ? 0 : idx - 1)];
  };
  return {c.front(), rank(0.25), rank(0.5), rank(0.75), c.back()};
}

BoundaryAudit boundary_audit(const PointSet& K, const DirectionNet& net, Scale target, double jitter) {
  const auto a = sweep(K, net, target, 0.0);
  const auto b = sweep(K, net, target, jitter);
  BoundaryAudit out;
  for (std::size_t i = 0; i < a.counts.size(); ++i) {
    const auto diff = a.counts[i] > b.counts[i] ? a.counts[i] - b.counts[i] : b.counts[i] - a.counts[i];
    if (diff) ++out.changed;
    out.max_difference = std::max(out.max_difference, diff);
  }
  return out;
}

DirectionNet exceptional_set(const ProjectionSweep& sw, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw PreconditionError("exceptional_set: t must lie in (0, 1]");
  const double threshold = std::pow(2.0, sw.target.k * t) * (1.0 + 1e-12);
  DirectionNet out{sw.target, {}, {}};
  for (std::size_t i = 0; i < sw.angles.size(); ++i) {
    if (static_cast<double>(sw.counts[i]) <= threshold) out.angles.push_back(sw.angles[i]);
  }
  return out;
}

double kaufman_constant(std::size_t exceptional_count, Scale target, double t) {
  const double L = target.k * std::numbers::ln2;
  return exceptional_count / (L * L * std::pow(2.0, target.k * t));
}

EnergySweep projection_energy(const PointSet& P, const DirectionNet& net, double s) {
  if (P.size() < 2) throw PreconditionError("projection_energy needs at least two points");
  if (net.angles.empty()) throw PreconditionError("projection_energy needs a nonempty direction net");
  EnergySweep out;
  out.angles = net.angles;
  out.energy = kernels::parallel::projection_energy(P.grid(), P.scale().k, net.angles, s);
  out.average = kernels::pairwise_sum(out.energy) / static_cast<double>(out.energy.size());
  return out;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("spearman needs two samples of equal size >= 2");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j < idx.size() && v[idx[j]] == v[idx[i]]) ++j;
      const double avg = (i + j - 1) / 2.0 + 1.0;
      for (std::size_t m = i; m < j; ++m) r[idx[m]] = avg;
      i = j;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace tubelab
