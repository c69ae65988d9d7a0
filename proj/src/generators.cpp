#include "tubelab/generators.hpp"

#include <algorithm>
#include <cmath>

#include "tubelab/errors.hpp"

namespace tubelab {

namespace {

void check_exponent(double v, const char* what) {
  if (!(v > 0.0 && v <= 1.0)) throw PreconditionError(std::string(what) + " must lie in (0, 1]");
}

}  // namespace

std::uint64_t Lcg::next() {
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  return state_;
}

std::uint64_t Lcg::below(std::uint64_t n) { return (next() >> 33) % n; }

std::vector<std::uint64_t> cantor_counts(int k, double s) {
  Scale::checked(k);
  check_exponent(s, "cantor exponent s");
  std::vector<std::uint64_t> n{1};
  for (int j = 1; j <= k; ++j) {
    const auto target = static_cast<std::uint64_t>(std::max(1.0, std::floor(std::pow(2.0, j * s) + 1e-9)));
    n.push_back(std::min(target, 2 * n.back()));
  }
  return n;
}

ValueSet cantor_line(int k, double s) {
  const auto n = cantor_counts(k, s);
  std::vector<std::int64_t> cells{0};
  for (int j = 1; j <= k; ++j) {
    const std::uint64_t prev = cells.size();
    const std::uint64_t extra = n[j] - prev;
    std::vector<std::int64_t> next;
    next.reserve(n[j]);
    for (std::uint64_t m = 0; m < prev; ++m) {
      next.push_back(2 * cells[m]);
      if ((m + 1) * extra / prev > m * extra / prev) next.push_back(2 * cells[m] + 1);
    }
    cells = std::move(next);
  }
  return ValueSet::from_grid(Scale(k), std::move(cells));
}

PointSet cantor_grid(int k, double s) {
  const auto line = cantor_line(k, s);
  std::vector<GridPoint> pts;
  pts.reserve(line.size() * line.size());
  for (auto x : line.grid()) {
    for (auto y : line.grid()) pts.push_back({x, y});
  }
  return PointSet::from_grid(Scale(k), std::move(pts));
}

PointSet full_grid(int k) {
  Scale::checked(k);
  const std::int64_t n = std::int64_t{1} << k;
  std::vector<GridPoint> pts;
  pts.reserve(static_cast<std::size_t>(n * n));
  for (std::int64_t x = 0; x < n; ++x) {
    for (std::int64_t y = 0; y < n; ++y) pts.push_back({x, y});
  }
  return PointSet::from_grid(Scale(k), std::move(pts));
}

Configuration furstenberg_product(int k, double s, std::uint64_t seed) {
  Scale::checked(k);
  if (k % 2 != 0 || k < 4) throw PreconditionError("furstenberg_product needs even k >= 4");
  check_exponent(s, "s");
  const int h = k / 2;
  const std::int64_t side = std::int64_t{1} << h;  // fine points per coarse side
  Lcg rng(seed);

  std::vector<GridPoint> pts;
  std::vector<std::int64_t> perm(static_cast<std::size_t>(side));
  for (std::int64_t cx = 0; cx < side / 2; ++cx) {
    const std::int64_t cy = side / 2 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(side / 4)));
    for (std::int64_t i = 0; i < side; ++i) perm[i] = i;
    for (std::int64_t i = side - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
    for (std::int64_t i = 0; i < side; ++i) pts.push_back({cx * side + i, cy * side + perm[i]});
  }

  Configuration cfg;
  cfg.scale = Scale(k);
  cfg.points = PointSet::from_grid(cfg.scale, std::move(pts));
  cfg.s = s;
  const auto slopes = cantor_line(k, s);
  for (const auto& g : cfg.points.grid()) {
    std::vector<DyadicTube> tubes;
    tubes.reserve(slopes.size());
    for (auto i : slopes.grid()) {
      // intercept cell floor((y - a x) / delta) in grid units
      const std::int64_t j = ((g.y << k) - i * g.x) >> k;
      tubes.push_back({cfg.scale, i, j});
    }
    cfg.families.push_back(TubeFamily::from(cfg.scale, std::move(tubes)));
  }
  cfg.epsilon = required_epsilon(cfg);
  return cfg;
}

QuasiProductConfig quasi_product_config(int k, double s, double tau, std::uint64_t seed) {
  Scale::checked(k);
  if (k < 4) throw PreconditionError("quasi_product_config needs k >= 4");
  check_exponent(s, "s");
  check_exponent(tau, "tau");
  QuasiProductConfig out;
  auto& qp = out.qp;
  qp.scale = Scale(k);
  qp.s = s;
  qp.tau = tau;
  qp.levels = cantor_line(k, tau);
  const auto base = cantor_line(k - 2, s);
  const std::int64_t n = std::int64_t{1} << k;
  for (auto b : qp.levels.grid()) {
    Lcg rng(seed ^ (static_cast<std::uint64_t>(b) * 0x9E3779B97F4A7C15ULL));
    const auto offset = 4 * static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n / 4)));
    std::vector<std::int64_t> a;
    for (auto v : base.grid()) a.push_back((4 * v + offset) % n);
    qp.slices.emplace(b, ValueSet::from_grid(qp.scale, std::move(a)));
  }

  const auto slopes = cantor_line(k, s);
  std::vector<DyadicTube> tubes;
  const auto P = qp.to_point_set();
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto p = P.point(i);
    for (auto a : slopes.grid()) {
      ParamWindow w{DyadicRational::grid(a, k), DyadicRational::grid(a + 1, k), DyadicRational::integer(-1),
                    DyadicRational::integer(1)};
      for (const auto& t : tubes_through(p, qp.scale, w)) tubes.push_back(t);
    }
  }
  out.tubes = TubeFamily::from(qp.scale, std::move(tubes));
  return out;
}

TripodConfig collinear_tripod(int k, const std::array<DyadicRational, 3>& levels, std::size_t n,
                              std::uint64_t seed) {
  Scale::checked(k);
  if (k < 4) throw PreconditionError("collinear_tripod needs k >= 4");
  if (n == 0) throw PreconditionError("collinear_tripod needs n >= 1");
  for (const auto& b : levels) {
    if (!b.on_grid(k) || b.sign() < 0 || b >= DyadicRational::integer(1)) {
      throw PreconditionError("tripod levels must be grid values in [0, 1)");
    }
  }
  if (levels[0] == levels[1] || levels[1] == levels[2] || levels[0] == levels[2]) {
    throw PreconditionError("tripod levels collide");
  }
  const std::int64_t half = std::int64_t{1} << (k - 1);
  // points on a level sit 4 grid units apart, and random placement jams well
  // before the level is full
  if (n > static_cast<std::size_t>(half / 4)) throw PreconditionError("collinear_tripod needs n <= 2^(k-3)");

  const Scale scale(k);
  TripodConfig out;
  out.levels = levels;
  std::array<std::vector<std::int64_t>, 3> used;
  std::vector<char> slope_taken(static_cast<std::size_t>(half), 0);
  std::vector<DyadicTube> tubes;
  Lcg rng(seed);
  const std::size_t max_attempts = 1000 * n + 1000;
  for (std::size_t attempt = 0; tubes.size() < n; ++attempt) {
    if (attempt >= max_attempts) throw PreconditionError("collinear_tripod: could not place the requested tubes");
    const auto alpha = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(half)));
    const auto beta = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(half - 2)));
    if (slope_taken[alpha]) continue;
    const DyadicTube t{scale, alpha, beta};
    std::array<std::int64_t, 3> a{};
    bool clash = false;
    for (int l = 0; l < 3; ++l) {
      const auto v = t.slope() * levels[l] + t.intercept();
      const std::int64_t f = v.floor_index(k);
      a[l] = DyadicRational::grid(f, k) == v ? f : f + 1;
      for (auto u : used[l]) clash = clash || std::llabs(u - a[l]) <= 3;
    }
    if (clash) continue;
    slope_taken[alpha] = 1;
    tubes.push_back(t);
    std::array<DyadicRational, 3> triple;
    for (int l = 0; l < 3; ++l) {
      used[l].push_back(a[l]);
      triple[l] = DyadicRational::grid(a[l], k);
    }
    out.triples.push_back(triple);
  }

  out.qp.scale = scale;
  out.qp.s = 1.0;
  out.qp.tau = 1.0;
  std::vector<std::int64_t> lv;
  for (int l = 0; l < 3; ++l) {
    lv.push_back(levels[l].grid_value(k));
    out.qp.slices.emplace(levels[l].grid_value(k), ValueSet::from_grid(scale, used[l]));
  }
  out.qp.levels = ValueSet::from_grid(scale, std::move(lv));
  // Keep tube order aligned with triples.
  out.tubes = TubeFamily::from(scale, tubes);
  std::vector<std::array<DyadicRational, 3>> ordered;
  for (const auto& t : out.tubes) {
    const auto it = std::find(tubes.begin(), tubes.end(), t);
    ordered.push_back(out.triples[static_cast<std::size_t>(it - tubes.begin())]);
  }
  out.triples = std::move(ordered);
  return out;
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::grid: return "grid";
    case GeneratorKind::cantor_grid: return "cantor_grid";
    case GeneratorKind::quasi_product: return "quasi_product";
    case GeneratorKind::furstenberg_product: return "furstenberg_product";
    case GeneratorKind::slope_net: return "slope_net";
    case GeneratorKind::collinear_tripod: return "collinear_tripod";
  }
  return "unknown";
}

GeneratorKind generator_kind(const std::string& name) {
  for (auto k : {GeneratorKind::grid, GeneratorKind::cantor_grid, GeneratorKind::quasi_product,
                 GeneratorKind::furstenberg_product, GeneratorKind::slope_net, GeneratorKind::collinear_tripod}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown generator kind '" + name + "'");
}

void check_spec(const GeneratorSpec& spec) {
  Scale::checked(spec.k);
  switch (spec.kind) {
    case GeneratorKind::grid:
      if (spec.k > 10) throw PreconditionError("grid generator limited to k <= 10");
      break;
    case GeneratorKind::cantor_grid:
    case GeneratorKind::slope_net:
      check_exponent(spec.s, "s");
      break;
    case GeneratorKind::quasi_product:
      check_exponent(spec.s, "s");
      check_exponent(spec.tau, "tau");
      if (spec.k < 4) throw PreconditionError("quasi_product needs k >= 4");
      break;
    case GeneratorKind::furstenberg_product:
      check_exponent(spec.s, "s");
      if (spec.k % 2 != 0 || spec.k < 4) throw PreconditionError("furstenberg_product needs even k >= 4");
      break;
    case GeneratorKind::collinear_tripod:
      if (spec.k < 4 || spec.n == 0) throw PreconditionError("collinear_tripod needs k >= 4 and n >= 1");
      if (spec.n > (std::size_t{1} << (spec.k - 3))) throw PreconditionError("collinear_tripod needs n <= 2^(k-3)");
      break;
  }
}

Generated generate(const GeneratorSpec& spec) {
  check_spec(spec);
  switch (spec.kind) {
    case GeneratorKind::grid: return full_grid(spec.k);
    case GeneratorKind::cantor_grid: return cantor_grid(spec.k, spec.s);
    case GeneratorKind::quasi_product: return quasi_product_config(spec.k, spec.s, spec.tau, spec.seed);
    case GeneratorKind::furstenberg_product: return furstenberg_product(spec.k, spec.s, spec.seed);
    case GeneratorKind::slope_net: return cantor_line(spec.k, spec.s);
    case GeneratorKind::collinear_tripod: return collinear_tripod(spec.k, spec.levels, spec.n, spec.seed);
  }
  throw PreconditionError("unhandled generator kind");
}

}  // namespace tubelab
