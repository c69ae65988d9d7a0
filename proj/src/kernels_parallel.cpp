#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "kernels_common.hpp"
#include "tubelab/kernels.hpp"

namespace tubelab::kernels {

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

namespace parallel {

namespace {

std::vector<std::size_t> order_by_x(std::span<const GridPoint> pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
  return order;
}

}  // namespace

double energy_sum(std::span<const GridPoint> pts, int k, double t) {
  const auto n = static_cast<std::int64_t>(pts.size());
  const double scale = std::pow(2.0, k * t);
  std::vector<double> rows(pts.size(), 0.0);

#pragma omp parallel
  {
    std::vector<double> terms;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
      terms.clear();
      for (std::int64_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const std::int64_t dx = pts[i].x - pts[j].x;
        const std::int64_t dy = pts[i].y - pts[j].y;
        // Squared grid distance is exact in a double (< 2^53).
        const auto d2 = static_cast<double>(dx * dx + dy * dy);
        terms.push_back(std::pow(d2, -0.5 * t));
      }
      rows[i] = pairwise_sum(terms) * scale;
    }
  }
  return pairwise_sum(rows);
}

std::vector<std::uint32_t> ball_counts(std::span<const GridPoint> pts, int k, int max_level) {
  const std::size_t levels = static_cast<std::size_t>(max_level) + 1;
  std::vector<std::uint32_t> out(pts.size() * levels, 0);
  const auto order = order_by_x(pts);
  std::vector<std::int64_t> xs(pts.size());
  for (std::size_t r = 0; r < order.size(); ++r) xs[r] = pts[order[r]].x;
  const std::int64_t reach = std::int64_t{1} << k;
  const auto n = static_cast<std::int64_t>(pts.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t r = 0; r < n; ++r) {
    const GridPoint c = pts[order[r]];
    auto row = std::span(out).subspan(order[r] * levels, levels);
    const auto lo = std::lower_bound(xs.begin(), xs.end(), c.x - reach) - xs.begin();
    const auto hi = std::upper_bound(xs.begin(), xs.end(), c.x + reach) - xs.begin();
    for (auto s = lo; s < hi; ++s) {
      const GridPoint& q = pts[order[s]];
      const std::int64_t dx = c.x - q.x;
      const std::int64_t dy = c.y - q.y;
      if (dy > reach || dy < -reach) continue;
      const int level = detail::radius_level(static_cast<std::uint64_t>(dx * dx + dy * dy), k, false);
      if (level >= 0) ++row[std::min(level, max_level)];
    }
    detail::suffix_accumulate(row);
  }
  return out;
}

std::vector<std::uint32_t> ball_counts_1d(std::span<const std::int64_t> vals, int k, int max_level) {
  const std::size_t levels = static_cast<std::size_t>(max_level) + 1;
  std::vector<std::uint32_t> out(vals.size() * levels, 0);
  std::vector<std::int64_t> sorted(vals.begin(), vals.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<std::int64_t>(vals.size());

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    auto row = std::span(out).subspan(static_cast<std::size_t>(i) * levels, levels);
    // Within radius 2^-j the count is a difference of two binary searches.
    for (int j = 0; j <= max_level; ++j) {
      const std::int64_t radius = std::int64_t{1} << (k - j);
      const auto lo = std::lower_bound(sorted.begin(), sorted.end(), vals[i] - radius);
      const auto hi = std::upper_bound(sorted.begin(), sorted.end(), vals[i] + radius);
      row[j] = static_cast<std::uint32_t>(hi - lo);
    }
  }
  return out;
}

std::vector<std::uint64_t> projection_counts(std::span<const GridPoint> pts, int k,
                                             std::span<const double> angles, int target_k,
                                             double offset) {
  const double unit = std::ldexp(1.0, k);
  const double delta = std::ldexp(1.0, -target_k);
  std::vector<std::uint64_t> out(angles.size(), 0);
  const auto m = static_cast<std::int64_t>(angles.size());

#pragma omp parallel
  {
    std::vector<std::int64_t> cells(pts.size());
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t a = 0; a < m; ++a) {
      const double c = std::cos(angles[a]), s = std::sin(angles[a]);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = (static_cast<double>(pts[i].x) * c + static_cast<double>(pts[i].y) * s) / unit;
        cells[i] = float_cell(v, delta, offset);
      }
      std::sort(cells.begin(), cells.end());
      out[a] = static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
    }
  }
  return out;
}

std::vector<double> projection_energy(std::span<const GridPoint> pts, int k,
                                      std::span<const double> angles, double s) {
  const double unit = std::ldexp(1.0, k);
  const double cap = std::pow(unit, s);
  const double n = static_cast<double>(pts.size());
  std::vector<double> out(angles.size(), 0.0);
  const auto m = static_cast<std::int64_t>(angles.size());

#pragma omp parallel
  {
    std::vector<double> proj(pts.size());
    std::vector<double> rows(pts.size());
    std::vector<double> terms;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t a = 0; a < m; ++a) {
      const double c = std::cos(angles[a]), sn = std::sin(angles[a]);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        proj[i] = (static_cast<double>(pts[i].x) * c + static_cast<double>(pts[i].y) * sn) / unit;
      }
      std::sort(proj.begin(), proj.end());
      // Each unordered pair once (sorted, so gaps are non-negative), doubled at the end.
      for (std::size_t i = 0; i < proj.size(); ++i) {
        terms.clear();
        for (std::size_t j = i + 1; j < proj.size(); ++j) {
          const double gap = proj[j] - proj[i];
          terms.push_back(gap > 0.0 ? std::min(cap, std::pow(gap, -s)) : cap);
        }
        rows[i] = pairwise_sum(terms);
      }
      out[a] = 2.0 * pairwise_sum(rows) / (n * n);
    }
  }
  return out;
}

std::vector<PairCount> pair_intersections(std::span<const std::vector<std::uint64_t>> families) {
  // Inverted index: tube key -> sorted list of owners.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> incidences;
  for (std::size_t p = 0; p < families.size(); ++p) {
    for (auto key : families[p]) incidences.emplace_back(key, static_cast<std::uint32_t>(p));
  }
  std::sort(incidences.begin(), incidences.end());
  std::vector<std::uint64_t> keys;
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < incidences.size(); ++i) {
    if (i == 0 || incidences[i].first != incidences[i - 1].first) {
      keys.push_back(incidences[i].first);
      starts.push_back(i);
    }
  }
  starts.push_back(incidences.size());

  const auto n = static_cast<std::int64_t>(families.size());
  std::vector<std::vector<PairCount>> per_point(families.size());

#pragma omp parallel
  {
    std::vector<std::uint32_t> counter(families.size(), 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t p = 0; p < n; ++p) {
      touched.clear();
      for (auto key : families[p]) {
        const auto t = static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin());
        for (std::size_t i = starts[t]; i < starts[t + 1]; ++i) {
          const std::uint32_t q = incidences[i].second;
          if (q <= p) continue;
          if (counter[q]++ == 0) touched.push_back(q);
        }
      }
      std::sort(touched.begin(), touched.end());
      auto& dst = per_point[p];
      for (auto q : touched) {
        dst.push_back({static_cast<std::uint32_t>(p), q, counter[q]});
        counter[q] = 0;
      }
    }
  }

  std::vector<PairCount> out;
  for (auto& v : per_point) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace parallel
}  // namespace tubelab::kernels
