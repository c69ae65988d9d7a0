#include "tubelab/delta_sets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "tubelab/kernels.hpp"

namespace tubelab {

namespace {

template <int D>
using Coord = std::array<std::int64_t, D>;

template <int D>
Coord<D> shifted(const Coord<D>& c, int s) {
  Coord<D> out;
  for (int i = 0; i < D; ++i) out[i] = c[i] >> s;
  return out;
}

std::vector<Coord<2>> coords(const PointSet& P) {
  std::vector<Coord<2>> out;
  for (const auto& p : P.grid()) out.push_back({p.x, p.y});
  return out;
}

std::vector<Coord<1>> coords(const ValueSet& P) {
  std::vector<Coord<1>> out;
  for (auto v : P.grid()) out.push_back({v});
  return out;
}

void check_params(const DeltaSetParams& params) {
  Scale::checked(params.scale.k);
  if (!(params.C >= 1.0)) throw PreconditionError("delta-set constant C must be >= 1");
  if (!(params.s >= 0.0 && params.s <= 2.0)) throw PreconditionError("delta-set exponent s must lie in [0, 2]");
}

// Points finer than delta: verify pairwise distance >= delta through a cell hash.
template <int D>
void check_separation(std::vector<Coord<D>> pts, int data_k, int k) {
  if (data_k <= k) return;  // distinct points on a grid no finer than delta
  const int shift = data_k - k;
  const std::int64_t unit = std::int64_t{1} << shift;
  std::vector<std::pair<Coord<D>, std::size_t>> cells;
  for (std::size_t i = 0; i < pts.size(); ++i) cells.push_back({shifted<D>(pts[i], shift), i});
  std::sort(cells.begin(), cells.end());
  auto dist2 = [&](std::size_t a, std::size_t b) {
    i128 d = 0;
    for (int c = 0; c < D; ++c) {
      const i128 t = pts[a][c] - pts[b][c];
      d += t * t;
    }
    return d;
  };
  const i128 min2 = static_cast<i128>(unit) * unit;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto home = shifted<D>(pts[i], shift);
    Coord<D> lo = home, hi = home;
    for (int c = 0; c < D; ++c) {
      lo[c] -= 1;
      hi[c] += 1;
    }
    auto it = std::lower_bound(cells.begin(), cells.end(), std::make_pair(lo, std::size_t{0}));
    for (; it != cells.end() && it->first <= hi; ++it) {
      bool near = true;
      for (int c = 0; c < D; ++c) near = near && std::llabs(it->first[c] - home[c]) <= 1;
      if (near && it->second != i && dist2(i, it->second) < min2) {
        throw PreconditionError("validate: input is not delta-separated");
      }
    }
  }
}

template <int D>
ValidationReport validate_impl(const std::vector<Coord<D>>& pts, std::span<const std::uint32_t> counts,
                               int data_k, const DeltaSetParams& params) {
  ValidationReport rep;
  rep.dimension = D;
  rep.params = params;
  rep.size = pts.size();
  rep.effective_constant = std::pow(2.0, params.s) * params.C;
  const int k = params.scale.k;
  const std::size_t levels = static_cast<std::size_t>(k) + 1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int j = 0; j <= k; ++j) {
      const double allowance = params.C * std::pow(2.0, (k - j) * params.s);
      const double ratio = counts[i * levels + j] / allowance;
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.witness_count = counts[i * levels + j];
        rep.witness_radius = DyadicRational::grid(1, j);
        rep.witness_center.x = DyadicRational::grid(pts[i][0], data_k);
        if constexpr (D == 2) rep.witness_center.y = DyadicRational::grid(pts[i][1], data_k);
      }
    }
  }
  rep.valid = rep.worst_ratio <= 1.0;
  return rep;
}

template <int D>
double content_impl(std::vector<Coord<D>> cells, int k, double s) {
  // Bottom level: each occupied delta-cell costs delta^s.
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  std::vector<double> cost(cells.size(), std::pow(2.0, -k * s));
  for (int level = k - 1; level >= 0; --level) {
    std::vector<Coord<D>> up;
    std::vector<double> up_cost;
    const double own = std::pow(2.0, -level * s);
    // Sorting by parent keeps siblings adjacent.
    std::vector<std::size_t> order(cells.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return shifted<D>(cells[a], 1) < shifted<D>(cells[b], 1);
    });
    for (std::size_t idx = 0; idx < order.size();) {
      const auto par = shifted<D>(cells[order[idx]], 1);
      double sum = 0.0;
      while (idx < order.size() && shifted<D>(cells[order[idx]], 1) == par) sum += cost[order[idx++]];
      up.push_back(par);
      up_cost.push_back(std::min(own, sum));
    }
    cells = std::move(up);
    cost = std::move(up_cost);
  }
  return std::accumulate(cost.begin(), cost.end(), 0.0);
}

template <int D>
std::vector<std::size_t> extract_impl(const std::vector<Coord<D>>& pts, int k, double s) {
  struct Node {
    std::vector<std::uint32_t> kids;  // indices into the level below; leaves hold a point index
    std::uint64_t count = 0;
  };
  // levels[j] holds the nodes of side 2^-j; levels[k] are leaves (one point each).
  std::vector<std::vector<Node>> levels(static_cast<std::size_t>(k) + 1);
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
  std::vector<Coord<D>> keys;
  for (auto i : order) {
    levels[k].push_back({{static_cast<std::uint32_t>(i)}, 1});
    keys.push_back(pts[i]);
  }

  auto remove_one = [&](int level, std::uint32_t node) {
    std::vector<std::pair<int, std::uint32_t>> path;
    while (level < k) {
      path.emplace_back(level, node);
      const auto& kids = levels[level][node].kids;
      std::uint32_t best = kids.front();
      for (auto c : kids) {
        if (levels[level + 1][c].count >= levels[level + 1][best].count) best = c;
      }
      node = best;
      ++level;
    }
    path.emplace_back(level, node);
    for (auto [l, n] : path) --levels[l][n].count;
  };

  for (int level = k - 1; level >= 0; --level) {
    std::vector<Coord<D>> up;
    const auto& below = levels[level + 1];
    const auto quota = static_cast<std::uint64_t>(std::max(1.0, std::floor(std::pow(2.0, (k - level) * s) + 1e-9)));
    for (std::size_t idx = 0; idx < below.size();) {
      const auto par = shifted<D>(keys[idx], 1);
      Node node;
      while (idx < below.size() && shifted<D>(keys[idx], 1) == par) {
        node.kids.push_back(static_cast<std::uint32_t>(idx));
        node.count += below[idx].count;
        ++idx;
      }
      up.push_back(par);
      levels[level].push_back(std::move(node));
      const auto me = static_cast<std::uint32_t>(levels[level].size() - 1);
      while (levels[level][me].count > quota) remove_one(level, me);
    }
    keys = std::move(up);
  }

  std::vector<std::size_t> kept;
  for (const auto& leaf : levels[k]) {
    if (leaf.count == 1) kept.push_back(leaf.kids.front());
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

ValidationReport validate(const PointSet& P, const DeltaSetParams& params) {
  check_params(params);
  if (P.empty()) throw PreconditionError("validate: empty set");
  if (params.scale.k > P.scale().k) throw ScaleError("validate: delta finer than data resolution");
  auto pts = coords(P);
  check_separation<2>(pts, P.scale().k, params.scale.k);
  // Radii are measured at data resolution; level j is radius 2^-j for j <= params.k.
  const auto counts = kernels::parallel::ball_counts(P.grid(), P.scale().k, params.scale.k);
  return validate_impl<2>(pts, counts, P.scale().k, params);
}

ValidationReport validate(const ValueSet& P, const DeltaSetParams& params) {
  check_params(params);
  if (P.empty()) throw PreconditionError("validate: empty set");
  if (params.scale.k > P.scale().k) throw ScaleError("validate: delta finer than data resolution");
  auto pts = coords(P);
  check_separation<1>(pts, P.scale().k, params.scale.k);
  const auto counts = kernels::parallel::ball_counts_1d(P.grid(), P.scale().k, params.scale.k);
  return validate_impl<1>(pts, counts, P.scale().k, params);
}

DiscreteContent discrete_content(const PointSet& B, double s) {
  if (B.empty()) throw PreconditionError("discrete_content: empty set");
  return {content_impl<2>(coords(B), B.scale().k, s), B.scale()};
}

DiscreteContent discrete_content(const ValueSet& B, double s) {
  if (B.empty()) throw PreconditionError("discrete_content: empty set");
  return {content_impl<1>(coords(B), B.scale().k, s), B.scale()};
}

Extraction extract(const PointSet& B, const DeltaSetParams& params) {
  check_params(params);
  if (B.empty()) throw PreconditionError("extract: empty set");
  if (params.scale != B.scale()) throw ScaleError("extract: params scale must equal the data scale");
  const auto kept = extract_impl<2>(coords(B), B.scale().k, params.s);
  std::vector<GridPoint> g;
  for (auto i : kept) g.push_back(B.grid(i));
  Extraction out;
  out.points = PointSet::from_grid(B.scale(), std::move(g));
  out.constant = 9.0;
  out.kappa = discrete_content(B, params.s).value;
  return out;
}

Extraction1d extract(const ValueSet& B, const DeltaSetParams& params) {
  check_params(params);
  if (B.empty()) throw PreconditionError("extract: empty set");
  if (params.scale != B.scale()) throw ScaleError("extract: params scale must equal the data scale");
  const auto kept = extract_impl<1>(coords(B), B.scale().k, params.s);
  std::vector<std::int64_t> g;
  for (auto i : kept) g.push_back(B.grid()[i]);
  Extraction1d out;
  out.values = ValueSet::from_grid(B.scale(), std::move(g));
  out.constant = 3.0;
  out.kappa = discrete_content(B, params.s).value;
  return out;
}

}  // namespace tubelab
