#include "tubelab/additive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "tubelab/delta_sets.hpp"
#include "tubelab/errors.hpp"

namespace tubelab {

namespace {

// Cell index of grid value v (units 2^-k) at scale target.
std::int64_t cell_of(std::int64_t v, int k, int target) {
  return target <= k ? (v >> (k - target)) : v * (std::int64_t{1} << (target - k));
}

std::vector<std::int64_t> on_scale(const ValueSet& V, int m) {
  std::vector<std::int64_t> out;
  out.reserve(V.size());
  for (auto v : V.grid()) out.push_back(v << (m - V.scale().k));
  return out;
}

std::uint64_t count_distinct(std::vector<std::int64_t>& v) {
  std::sort(v.begin(), v.end());
  return static_cast<std::uint64_t>(std::unique(v.begin(), v.end()) - v.begin());
}

void check_levels(const DyadicRational& b2, const DyadicRational& b3) {
  if (b2 == b3) throw PreconditionError("tripod levels b2 and b3 must differ");
}

// floor(n / d) for d != 0.
i128 floor_div(i128 n, i128 d) {
  i128 q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

}  // namespace

PointSet QuasiProduct::to_point_set() const {
  std::vector<GridPoint> pts;
  for (const auto& [b, A] : slices) {
    for (auto a : on_scale(A, scale.k)) pts.push_back({b, a});
  }
  return PointSet::from_grid(scale, std::move(pts));
}

const ValueSet& QuasiProduct::slice(const DyadicRational& b) const {
  if (!b.on_grid(scale.k)) throw PreconditionError("level is not on the quasi-product grid");
  const auto it = slices.find(b.grid_value(scale.k));
  if (it == slices.end()) throw PreconditionError("no slice at level " + b.to_string());
  return it->second;
}

QuasiProductValidation validate_quasi_product(const QuasiProduct& qp, double C) {
  QuasiProductValidation out;
  const auto lv = validate(qp.levels, {qp.scale, qp.tau, C});
  out.levels_valid = lv.valid;
  out.levels_ratio = lv.worst_ratio;
  out.slices_valid = true;
  for (const auto& [b, A] : qp.slices) {
    const auto sv = validate(A, {qp.scale, qp.s, C});
    out.slices_valid = out.slices_valid && sv.valid;
    out.worst_slice_ratio = std::max(out.worst_slice_ratio, sv.worst_ratio);
  }
  return out;
}

std::uint64_t sumset_cover(const ValueSet& A, const ValueSet& B, Scale target) {
  Scale::checked(target.k);
  const int m = std::max(A.scale().k, B.scale().k);
  const auto a = on_scale(A, m), b = on_scale(B, m);
  std::vector<std::int64_t> cells;
  cells.reserve(a.size() * b.size());
  for (auto x : a) {
    for (auto y : b) cells.push_back(cell_of(x + y, m, target.k));
  }
  return count_distinct(cells);
}

bool PairGraph::eligible() const {
  return K >= 1.0 && static_cast<double>(edges.size()) * K >= static_cast<double>(A.size()) * B.size() * (1.0 - 1e-12);
}

std::uint64_t restricted_sumset(const PairGraph& G, Scale target) {
  Scale::checked(target.k);
  const int m = std::max(G.A.scale().k, G.B.scale().k);
  const auto a = on_scale(G.A, m), b = on_scale(G.B, m);
  std::vector<std::int64_t> cells;
  cells.reserve(G.edges.size());
  for (auto [i, j] : G.edges) cells.push_back(cell_of(a.at(i) + b.at(j), m, target.k));
  return count_distinct(cells);
}

PlunneckeReport plunnecke_corollary_check(const ValueSet& A, const ValueSet& B, Scale target) {
  if (A.empty() || B.empty()) throw PreconditionError("plunnecke_corollary_check: empty set");
  PlunneckeReport r;
  r.cover_ab = sumset_cover(A, B, target);
  r.cover_bb = sumset_cover(B, B, target);
  const double n = static_cast<double>(A.size());
  r.c0 = r.cover_ab / n;
  r.bound = r.c0 * r.c0 * n * kPlunneckeRounding;
  r.size_ratio = static_cast<double>(B.size()) / n;
  r.holds = static_cast<double>(r.cover_bb) <= r.bound;
  return r;
}

BsgResult bsg_refine(const PairGraph& G) {
  if (!G.eligible()) throw PreconditionError("bsg_refine: graph has fewer than |A||B|/K edges");
  const std::size_t na = G.A.size(), nb = G.B.size();
  std::vector<char> alive_a(na, 1), alive_b(nb, 1);
  BsgResult r;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::uint64_t> da(na, 0), db(nb, 0);
    std::uint64_t m = 0;
    for (auto [i, j] : G.edges) {
      if (alive_a[i] && alive_b[j]) {
        ++da[i];
        ++db[j];
        ++m;
      }
    }
    const auto ca = std::count(alive_a.begin(), alive_a.end(), 1);
    const auto cb = std::count(alive_b.begin(), alive_b.end(), 1);
    if (ca == 0 || cb == 0) break;
    const double half_a = 0.5 * m / ca, half_b = 0.5 * m / cb;
    std::vector<char> next_a = alive_a, next_b = alive_b;
    for (std::size_t i = 0; i < na; ++i) {
      if (alive_a[i] && (da[i] == 0 || da[i] < half_a)) next_a[i] = 0, changed = true;
    }
    for (std::size_t j = 0; j < nb; ++j) {
      if (alive_b[j] && (db[j] == 0 || db[j] < half_b)) next_b[j] = 0, changed = true;
    }
    alive_a.swap(next_a);
    alive_b.swap(next_b);
    if (changed) ++r.rounds;
  }

  std::vector<std::int64_t> a, b;
  for (std::size_t i = 0; i < na; ++i) {
    if (alive_a[i]) a.push_back(G.A.grid()[i]);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    if (alive_b[j]) b.push_back(G.B.grid()[j]);
  }
  for (auto [i, j] : G.edges) r.edges_kept += alive_a[i] && alive_b[j];
  r.A_refined = ValueSet::from_grid(G.A.scale(), a);
  r.B_refined = ValueSet::from_grid(G.B.scale(), b);
  r.degenerate = G.K >= static_cast<double>(std::min(na, nb));
  if (!a.empty() && !b.empty()) {
    r.sum_refined = sumset_cover(r.A_refined, r.B_refined, Scale(std::max(G.A.scale().k, G.B.scale().k)));
  }

  if (a.empty() || b.empty() || r.edges_kept == 0) {
    r.c = std::numeric_limits<double>::infinity();
    return r;
  }
  const double A = static_cast<double>(na), B = static_cast<double>(nb);
  const double terms[] = {
      std::log(A / a.size()),
      std::log(B / b.size()),
      std::log(r.sum_refined / std::sqrt(A * B)),
      std::log(A * B / r.edges_kept),
  };
  const double logK = std::log(G.K);
  r.c = 0.0;
  for (double t : terms) {
    if (t <= 1e-12) continue;
    r.c = logK > 0.0 ? std::max(r.c, t / logK) : std::numeric_limits<double>::infinity();
  }
  return r;
}

bool bsg_consistent(const PairGraph& G, const BsgResult& r) {
  if (!std::isfinite(r.c)) return false;
  const double Kc = std::pow(G.K, r.c) * (1.0 + 1e-9);
  const double A = static_cast<double>(G.A.size()), B = static_cast<double>(G.B.size());
  return r.A_refined.size() * Kc >= A && r.B_refined.size() * Kc >= B &&
         r.sum_refined <= Kc * std::sqrt(A * B) && r.edges_kept * Kc >= A * B;
}

double tripod_projection(double x, double y, const DyadicRational& b1, const DyadicRational& b2,
                         const DyadicRational& b3) {
  check_levels(b2, b3);
  return x + (b2 - b1).to_double() / (b3 - b2).to_double() * y;
}

std::vector<DyadicRational> slice_hits(const QuasiProduct& qp, const DyadicTube& t, const DyadicRational& b) {
  const auto& A = qp.slice(b);
  const auto d = DyadicRational::grid(1, t.scale.k);
  const auto alpha = t.slope(), beta = t.intercept();
  const DyadicRational ends[] = {alpha * b + beta, (alpha + d) * b + beta, alpha * b + beta + d,
                                 (alpha + d) * b + beta + d};
  const auto lo = *std::min_element(std::begin(ends), std::end(ends));
  const auto hi = *std::max_element(std::begin(ends), std::end(ends));
  const int k = A.scale().k;
  auto it = std::lower_bound(A.grid().begin(), A.grid().end(), lo.floor_index(k));
  std::vector<DyadicRational> out;
  for (; it != A.grid().end() && DyadicRational::grid(*it, k) <= hi; ++it) {
    const auto a = DyadicRational::grid(*it, k);
    if (tube_contains(t, {b, a})) out.push_back(a);
  }
  return out;
}

SlicePairs tube_slice_pairs(const QuasiProduct& qp, const TubeFamily& T, const DyadicRational& b1,
                            const DyadicRational& b3) {
  SlicePairs out;
  for (const auto& t : T) {
    const auto h1 = slice_hits(qp, t, b1);
    const auto h3 = slice_hits(qp, t, b3);
    for (const auto* h : {&h1, &h3}) {
      if (h->size() > 1) {
        nlohmann::json w = {{"tube", {{"k", t.scale.k}, {"a", t.a}, {"b", t.b}}},
                            {"level", (h == &h1 ? b1 : b3).to_string()},
                            {"points", {(*h)[0].to_string(), (*h)[1].to_string()}}};
        throw HypothesisError("each tube meets at most one point per slice", w.dump());
      }
    }
    if (h1.size() == 1 && h3.size() == 1) {
      out.pairs.emplace_back(h1[0], h3[0]);
      ++out.tubes_used;
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  out.pairs.erase(std::unique(out.pairs.begin(), out.pairs.end()), out.pairs.end());
  return out;
}

TubeFamily prune_to_single_crossings(const QuasiProduct& qp, const TubeFamily& T) {
  std::vector<DyadicTube> kept;
  for (const auto& t : T) {
    bool ok = true;
    for (const auto& [b, A] : qp.slices) {
      if (slice_hits(qp, t, DyadicRational::grid(b, qp.scale.k)).size() > 1) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(t);
  }
  return TubeFamily::from(T.scale(), std::move(kept));
}

std::uint64_t tripod_image_cover(const std::vector<std::pair<DyadicRational, DyadicRational>>& pairs,
                                 const DyadicRational& b1, const DyadicRational& b2, const DyadicRational& b3,
                                 Scale target) {
  check_levels(b2, b3);
  Scale::checked(target.k);
  const auto D = b3 - b2;
  const auto r = b2 - b1;
  std::vector<std::int64_t> cells;
  cells.reserve(pairs.size());
  for (const auto& [a1, a3] : pairs) {
    // floor(pi 2^t) = floor((a1 D + r a3) 2^t / D)
    const auto N = (a1 * D + r * a3).scaled_pow2(target.k);
    const int E = std::max(N.exponent(), D.exponent());
    const i128 n = detail::shl_checked(N.numerator(), E - N.exponent());
    const i128 d = detail::shl_checked(D.numerator(), E - D.exponent());
    cells.push_back(static_cast<std::int64_t>(floor_div(n, d)));
  }
  return count_distinct(cells);
}

double tripod_residual(const DyadicRational& a1, const DyadicRational& a2, const DyadicRational& a3,
                       const DyadicRational& b1, const DyadicRational& b2, const DyadicRational& b3) {
  check_levels(b2, b3);
  const auto num = a1 * (b3 - b2) + (b2 - b1) * a3 - (b3 - b1) * a2;
  return std::abs(num.to_double() / (b3 - b2).to_double());
}

}  // namespace tubelab
