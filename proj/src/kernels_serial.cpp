#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "kernels_common.hpp"
#include "tubelab/kernels.hpp"

namespace tubelab::kernels {

std::int64_t float_cell(double v, double delta, double offset) {
  return static_cast<std::int64_t>(std::ceil((v + offset - kBoundaryTol) / delta)) - 1;
}

double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t mid = v.size() / 2;
  return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

namespace serial {

double energy_sum(std::span<const GridPoint> pts, int k, double t) {
  const double unit = std::ldexp(1.0, k);
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const double dx = static_cast<double>(pts[i].x - pts[j].x) / unit;
      const double dy = static_cast<double>(pts[i].y - pts[j].y) / unit;
      total += std::pow(std::hypot(dx, dy), -t);
    }
  }
  return total;
}

std::vector<std::uint32_t> ball_counts(std::span<const GridPoint> pts, int k, int max_level) {
  const std::size_t levels = static_cast<std::size_t>(max_level) + 1;
  std::vector<std::uint32_t> out(pts.size() * levels, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto row = std::span(out).subspan(i * levels, levels);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const std::int64_t dx = pts[i].x - pts[j].x;
      const std::int64_t dy = pts[i].y - pts[j].y;
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
  for (std::size_t i = 0; i < vals.size(); ++i) {
    auto row = std::span(out).subspan(i * levels, levels);
    for (std::size_t j = 0; j < vals.size(); ++j) {
      const auto d = static_cast<std::uint64_t>(std::llabs(vals[i] - vals[j]));
      const int level = detail::radius_level(d, k, true);
      if (level >= 0) ++row[std::min(level, max_level)];
    }
    detail::suffix_accumulate(row);
  }
  return out;
}

std::vector<std::uint64_t> projection_counts(std::span<const GridPoint> pts, int k,
                                             std::span<const double> angles, int target_k,
                                             double offset) {
  const double unit = std::ldexp(1.0, k);
  const double delta = std::ldexp(1.0, -target_k);
  std::vector<std::uint64_t> out;
  out.reserve(angles.size());
  for (double e : angles) {
    const double c = std::cos(e), s = std::sin(e);
    std::vector<std::int64_t> cells;
    for (const auto& p : pts) {
      const double v = (static_cast<double>(p.x) * c + static_cast<double>(p.y) * s) / unit;
      cells.push_back(float_cell(v, delta, offset));
    }
    std::sort(cells.begin(), cells.end());
    out.push_back(static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin()));
  }
  return out;
}

std::vector<double> projection_energy(std::span<const GridPoint> pts, int k,
                                      std::span<const double> angles, double s) {
  const double unit = std::ldexp(1.0, k);
  const double cap = std::pow(unit, s);
  const double n = static_cast<double>(pts.size());
  std::vector<double> out;
  for (double e : angles) {
    const double c = std::cos(e), sn = std::sin(e);
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double vi = (static_cast<double>(pts[i].x) * c + static_cast<double>(pts[i].y) * sn) / unit;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (i == j) continue;
        const double vj = (static_cast<double>(pts[j].x) * c + static_cast<double>(pts[j].y) * sn) / unit;
        const double gap = std::abs(vi - vj);
        total += gap > 0.0 ? std::min(cap, std::pow(gap, -s)) : cap;
      }
    }
    out.push_back(total / (n * n));
  }
  return out;
}

std::vector<PairCount> pair_intersections(std::span<const std::vector<std::uint64_t>> families) {
  std::vector<PairCount> out;
  for (std::size_t p = 0; p < families.size(); ++p) {
    for (std::size_t q = p + 1; q < families.size(); ++q) {
      const auto& a = families[p];
      const auto& b = families[q];
      std::uint32_t common = 0;
      auto ia = a.begin();
      auto ib = b.begin();
      while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
          ++ia;
        } else if (*ib < *ia) {
          ++ib;
        } else {
          ++common;
          ++ia;
          ++ib;
        }
      }
      if (common > 0) {
        out.push_back({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(q), common});
      }
    }
  }
  return out;
}

}  // namespace serial
}  // namespace tubelab::kernels
