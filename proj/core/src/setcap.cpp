#include "capmax/setcap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "capmax/parallel.hpp"

namespace capmax {

LevelSetApprox superlevel_cells(const MaximalField& mfield, double lambda) {
  if (!mfield.grid.has_value())
    throw std::invalid_argument("superlevel_cells needs a maximal field covering a full grid");
  LevelSetApprox set;
  set.lambda = lambda;
  set.rep = LevelSetApprox::Rep::cells;
  set.grid = *mfield.grid;
  for (std::size_t i = 0; i < mfield.values.size(); ++i)
    if (mfield.values[i] > lambda) set.cell_ids.push_back(static_cast<std::int64_t>(i));
  return set;
}

std::vector<Point> ray_directions(int dim, int count) {
  if (dim == 1) {
    Point plus(1.0), minus(-1.0);
    return {plus, minus};
  }
  if (count < 3) throw std::invalid_argument("dimension 2 needs at least 3 ray directions");
  std::vector<Point> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
    dirs.push_back(direction_from_angle(2.0 * std::numbers::pi * j / count));
  return dirs;
}

LevelSetApprox superlevel_boundary_rays(const MaximalEvaluator& eval, double lambda,
                                        const Point& center, const std::vector<Point>& directions,
                                        const RayTraceOptions& options) {
  if (!(lambda > 0.0)) throw std::domain_error("level-set threshold must be positive");
  if (directions.empty()) throw std::invalid_argument("ray tracing needs at least one direction");
  const double at_center = eval(center);
  if (!(at_center > lambda))
    throw std::domain_error("threshold at or above the maximal value at the ray center");
  const double mass = eval.mass();
  if (!(mass > 0.0)) throw std::domain_error("ray tracing needs a positive-mass input");

  // Certified cap: past support_distance + c^{-1}(mass/lambda) every ball
  // reaching the support is too expensive, so M <= lambda there.  The 1e-9
  // inflation keeps the cap on the certified side of the inverse's roundoff.
  const double support_dist = distance(eval.support_center(), center) + eval.support_radius();
  const double r_cap =
      (support_dist + inverse_ball_capacity(eval.profile(), mass / lambda)) * (1.0 + 1e-9);
  if (r_cap > options.outer_cap) {
    std::ostringstream os;
    os << "certified crossing cap " << r_cap << " exceeds the outer radius cap "
       << options.outer_cap;
    throw std::runtime_error(os.str());
  }

  LevelSetApprox set;
  set.lambda = lambda;
  set.rep = LevelSetApprox::Rep::rays;
  set.center = center;
  set.crossings.resize(directions.size());

  std::vector<std::string> errors(directions.size());
  parallel_for(directions.size(), options.threads, [&](std::size_t di) {
    const Point& u = directions[di];
    auto value_at = [&](double r) { return eval(add(center, scale(u, r))); };

    double hi = r_cap;
    if (value_at(hi) > lambda) {
      std::ostringstream os;
      os << "no bracket below the march cap along direction " << di;
      errors[di] = os.str();
      return;
    }
    double lo = 0.0;
    double r = 0.5 * r_cap;
    for (int j = 0; j < 80; ++j) {
      if (value_at(r) > lambda) {
        lo = r;
        break;
      }
      hi = r;
      r *= 0.5;
    }
    for (int it = 0; it < options.max_bisections && (hi - lo) > options.rel_tol * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (value_at(mid) > lambda)
        lo = mid;
      else
        hi = mid;
    }
    set.crossings[di] = {u, lo, hi};
  });
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return set;
}

// --- minimal enclosing ball ---------------------------------------------------

namespace {

constexpr double kMebSlack = 1e-10;

bool ball_contains(const Ball& b, const Point& p) {
  return distance(b.center, p) <= b.radius * (1.0 + kMebSlack) + 1e-300;
}

Ball ball_of_two(const Point& a, const Point& b) {
  Ball out;
  out.center = scale(add(a, b), 0.5);
  out.radius = 0.5 * distance(a, b);
  return out;
}

Ball ball_of_three(const Point& a, const Point& b, const Point& c) {
  const double d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
  const double scale_ref = std::max({norm(a), norm(b), norm(c), 1.0});
  if (std::abs(d) < 1e-14 * scale_ref * scale_ref) {
    // Collinear: the diameter ball of the farthest pair covers all three.
    Ball best = ball_of_two(a, b);
    for (const Ball& cand : {ball_of_two(a, c), ball_of_two(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  const double a2 = a[0] * a[0] + a[1] * a[1];
  const double b2 = b[0] * b[0] + b[1] * b[1];
  const double c2 = c[0] * c[0] + c[1] * c[1];
  Point center(
      (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d,
      (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d);
  center.dim = a.dim;
  Ball out;
  out.center = center;
  out.radius = std::max({distance(center, a), distance(center, b), distance(center, c)});
  return out;
}

}  // namespace

Ball minimal_enclosing_ball(const std::vector<Point>& points, std::uint64_t seed) {
  if (points.empty()) throw std::domain_error("minimal enclosing ball of an empty point set");
  const int dim = points.front().dim;

  if (dim == 1) {
    double lo = points.front()[0], hi = lo;
    for (const Point& p : points) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    Ball b;
    b.center = Point(0.5 * (lo + hi));
    b.radius = 0.5 * (hi - lo);
    return b;
  }

  std::vector<Point> pts = points;
  SplitMix64 rng(seed);
  for (std::size_t i = pts.size(); i > 1; --i)
    std::swap(pts[i - 1], pts[rng.next_below(i)]);

  Ball ball{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (ball_contains(ball, pts[i])) continue;
    ball = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (ball_contains(ball, pts[j])) continue;
      ball = ball_of_two(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (ball_contains(ball, pts[k])) continue;
        ball = ball_of_three(pts[i], pts[j], pts[k]);
      }
    }
  }
  return ball;
}

// --- distance transform ---------------------------------------------------------

namespace {

// 1-D squared-distance lower envelope (index units).
void dt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
           std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(const Grid& grid, const std::vector<char>& source) {
  const auto nx = grid.cells_x();
  const auto ny = grid.cells_y();
  if (static_cast<std::int64_t>(source.size()) != grid.cell_count())
    throw std::invalid_argument("distance transform mask size mismatch");
  const double big = 1e30;
  std::vector<double> dist(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) dist[i] = source[i] ? 0.0 : big;

  const int n_max = static_cast<int>(std::max(nx, ny));
  std::vector<double> f(static_cast<std::size_t>(n_max)), d(static_cast<std::size_t>(n_max)),
      z(static_cast<std::size_t>(n_max) + 1);
  std::vector<int> v(static_cast<std::size_t>(n_max));

  // Pass along x within each row.
  for (std::int64_t iy = 0; iy < ny; ++iy) {
    f.assign(static_cast<std::size_t>(nx), 0.0);
    for (std::int64_t ix = 0; ix < nx; ++ix)
      f[static_cast<std::size_t>(ix)] = dist[static_cast<std::size_t>(iy * nx + ix)];
    d.resize(static_cast<std::size_t>(nx));
    dt_1d(f, d, v, z);
    for (std::int64_t ix = 0; ix < nx; ++ix)
      dist[static_cast<std::size_t>(iy * nx + ix)] = d[static_cast<std::size_t>(ix)];
  }
  if (grid.dim == 2) {
    for (std::int64_t ix = 0; ix < nx; ++ix) {
      f.assign(static_cast<std::size_t>(ny), 0.0);
      for (std::int64_t iy = 0; iy < ny; ++iy)
        f[static_cast<std::size_t>(iy)] = dist[static_cast<std::size_t>(iy * nx + ix)];
      d.resize(static_cast<std::size_t>(ny));
      dt_1d(f, d, v, z);
      for (std::int64_t iy = 0; iy < ny; ++iy)
        dist[static_cast<std::size_t>(iy * nx + ix)] = d[static_cast<std::size_t>(iy)];
    }
  }
  const double h2 = grid.h * grid.h;
  for (double& x : dist) x *= h2;
  return dist;
}

// --- inscribed / enclosing --------------------------------------------------------

Ball inscribed_ball(const LevelSetApprox& set, const std::optional<Point>& center_hint) {
  if (set.empty()) throw std::domain_error("inscribed ball of an empty set");

  if (set.rep == LevelSetApprox::Rep::rays) {
    Ball b;
    b.center = set.center;
    b.radius = std::numeric_limits<double>::infinity();
    for (const RayCrossing& c : set.crossings) b.radius = std::min(b.radius, c.r_in);
    return b;
  }

  const Grid& g = set.grid;
  std::vector<char> outside(static_cast<std::size_t>(g.cell_count()), 1);
  for (std::int64_t id : set.cell_ids) outside[static_cast<std::size_t>(id)] = 0;
  const std::vector<double> sq = squared_distance_transform(g, outside);

  const double pad = 0.5 * g.h * std::sqrt(static_cast<double>(g.dim));
  auto depth_of = [&](std::int64_t id) {
    const double edt = std::sqrt(sq[static_cast<std::size_t>(id)]) - pad;
    const double border = g.inradius_from(g.cell_center(id));
    return std::max(0.0, std::min(edt, border));
  };

  std::int64_t best_id = set.cell_ids.front();
  double best_depth = depth_of(best_id);
  for (std::int64_t id : set.cell_ids) {
    const double d = depth_of(id);
    if (d > best_depth) {
      best_depth = d;
      best_id = id;
    }
  }
  if (center_hint.has_value()) {
    const std::int64_t hint_id = g.cell_of(*center_hint);
    if (hint_id >= 0 && !outside[static_cast<std::size_t>(hint_id)] &&
        depth_of(hint_id) > best_depth) {
      best_id = hint_id;
      best_depth = depth_of(hint_id);
    }
  }
  Ball b;
  b.center = g.cell_center(best_id);
  b.radius = best_depth;
  return b;
}

Ball enclosing_ball(const LevelSetApprox& set) {
  if (set.empty()) throw std::domain_error("enclosing ball of an empty set");
  if (set.rep == LevelSetApprox::Rep::rays) {
    std::vector<Point> pts;
    pts.reserve(set.crossings.size() + 1);
    pts.push_back(set.center);
    for (const RayCrossing& c : set.crossings) pts.push_back(add(set.center, scale(c.dir, c.r_out)));
    return minimal_enclosing_ball(pts);
  }
  std::vector<Point> centers;
  centers.reserve(set.cell_ids.size());
  for (std::int64_t id : set.cell_ids) centers.push_back(set.grid.cell_center(id));
  Ball b = minimal_enclosing_ball(centers);
  b.radius += 0.5 * set.grid.h * std::sqrt(static_cast<double>(set.grid.dim));
  return b;
}

// --- capacity bounds ------------------------------------------------------------

namespace {

// Connected components of the cell set under the 2*dim neighborhood.
std::vector<std::vector<std::int64_t>> cell_components(const Grid& g,
                                                       const std::vector<std::int64_t>& ids) {
  std::vector<char> in_set(static_cast<std::size_t>(g.cell_count()), 0);
  for (std::int64_t id : ids) in_set[static_cast<std::size_t>(id)] = 1;
  std::vector<char> seen(static_cast<std::size_t>(g.cell_count()), 0);
  std::vector<std::vector<std::int64_t>> comps;
  const auto nx = g.cells_x();
  const auto ny = g.cells_y();
  for (std::int64_t id : ids) {
    if (seen[static_cast<std::size_t>(id)]) continue;
    comps.emplace_back();
    std::deque<std::int64_t> queue{id};
    seen[static_cast<std::size_t>(id)] = 1;
    while (!queue.empty()) {
      const std::int64_t cur = queue.front();
      queue.pop_front();
      comps.back().push_back(cur);
      const std::int64_t ix = cur % nx, iy = cur / nx;
      const std::int64_t nbr[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
      const int n_nbrs = g.dim == 1 ? 2 : 4;
      for (int k = 0; k < n_nbrs; ++k) {
        const std::int64_t jx = nbr[k][0], jy = nbr[k][1];
        if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
        const std::int64_t j = jx + nx * jy;
        if (!in_set[static_cast<std::size_t>(j)] || seen[static_cast<std::size_t>(j)]) continue;
        seen[static_cast<std::size_t>(j)] = 1;
        queue.push_back(j);
      }
    }
  }
  return comps;
}

}  // namespace

CapacityBounds capacity_bounds(const LevelSetApprox& set, const RadialProfile& profile) {
  CapacityBounds b;
  b.witness_lower = inscribed_ball(set, set.rep == LevelSetApprox::Rep::rays
                                            ? std::optional<Point>(set.center)
                                            : std::nullopt);
  b.witness_enclosing = enclosing_ball(set);
  b.lower = b.witness_lower.radius > 0.0 ? ball_capacity(profile, b.witness_lower.radius) : 0.0;
  const double enclosing_cap = ball_capacity(profile, b.witness_enclosing.radius);

  if (set.rep == LevelSetApprox::Rep::cells && set.cell_ids.size() > 1) {
    const double pad = 0.5 * set.grid.h * std::sqrt(static_cast<double>(set.grid.dim));
    double cover_sum = 0.0;
    for (const auto& comp : cell_components(set.grid, set.cell_ids)) {
      std::vector<Point> centers;
      centers.reserve(comp.size());
      for (std::int64_t id : comp) centers.push_back(set.grid.cell_center(id));
      Ball cb = minimal_enclosing_ball(centers);
      cb.radius += pad;
      b.witness_cover.push_back(cb);
      cover_sum += ball_capacity(profile, cb.radius);
    }
    b.upper = std::min(enclosing_cap, cover_sum);
  } else {
    b.witness_cover.push_back(b.witness_enclosing);
    b.upper = enclosing_cap;
  }
  b.lower = std::min(b.lower, b.upper);
  return b;
}

// --- greedy covering -------------------------------------------------------------

BallFamily greedy_disjoint_subfamily(const BallFamily& family) {
  std::vector<std::size_t> order(family.balls.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Ball& A = family.balls[a];
    const Ball& B = family.balls[b];
    if (A.radius != B.radius) return A.radius > B.radius;
    if (lexicographic_less(A.center, B.center)) return true;
    if (lexicographic_less(B.center, A.center)) return false;
    return a < b;
  });
  BallFamily out;
  out.dilation = family.dilation;
  for (std::size_t i : order) {
    const Ball& cand = family.balls[i];
    bool disjoint = true;
    for (const Ball& sel : out.balls) {
      if (distance(cand.center, sel.center) < cand.radius + sel.radius) {
        disjoint = false;
        break;
      }
    }
    if (disjoint) out.balls.push_back(cand);
  }
  return out;
}

CoverageReport check_dilate_coverage(const BallFamily& family, const BallFamily& selection,
                                     std::size_t probes, SplitMix64& rng) {
  CoverageReport report;
  if (family.balls.empty()) return report;
  const int dim = family.balls.front().center.dim;
  double lo[kMaxDim], hi[kMaxDim];
  for (int a = 0; a < dim; ++a) {
    lo[a] = family.balls.front().center[a] - family.balls.front().radius;
    hi[a] = family.balls.front().center[a] + family.balls.front().radius;
  }
  for (const Ball& b : family.balls)
    for (int a = 0; a < dim; ++a) {
      lo[a] = std::min(lo[a], b.center[a] - b.radius);
      hi[a] = std::max(hi[a], b.center[a] + b.radius);
    }
  const std::size_t max_attempts = probes * 1000;
  std::size_t attempts = 0;
  while (report.probes < probes && attempts < max_attempts) {
    ++attempts;
    Point p;
    p.dim = dim;
    for (int a = 0; a < dim; ++a) p[a] = rng.uniform(lo[a], hi[a]);
    bool in_union = false;
    for (const Ball& b : family.balls)
      if (distance(p, b.center) < b.radius) {
        in_union = true;
        break;
      }
    if (!in_union) continue;
    ++report.probes;
    bool covered = false;
    for (const Ball& b : selection.balls)
      if (distance(p, b.center) < selection.dilation * b.radius) {
        covered = true;
        break;
      }
    if (!covered) ++report.misses;
  }
  return report;
}

BallFamily random_ball_family(std::size_t count, int dim, double box_half_width, double r_min,
                              double r_max, SplitMix64& rng) {
  if (!(r_min > 0.0) || !(r_max >= r_min)) throw std::invalid_argument("bad ball radius range");
  BallFamily family;
  family.balls.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Ball b;
    b.center.dim = dim;
    for (int a = 0; a < dim; ++a) b.center[a] = rng.uniform(-box_half_width, box_half_width);
    b.radius = rng.uniform(r_min, r_max);
    family.balls.push_back(b);
  }
  return family;
}

// --- ray-set probing --------------------------------------------------------------

ProbeReport probe_level_set(const LevelSetApprox& set, const MaximalEvaluator& eval, SplitMix64& rng,
                            std::size_t probes_per_side) {
  ProbeReport report;
  if (set.rep != LevelSetApprox::Rep::rays || set.crossings.empty()) return report;
  for (std::size_t i = 0; i < probes_per_side; ++i) {
    const auto& c = set.crossings[rng.next_below(set.crossings.size())];
    ++report.interior_checked;
    if (!(eval(add(set.center, scale(c.dir, 0.9 * c.r_in))) > set.lambda)) ++report.interior_failures;
  }
  for (std::size_t i = 0; i < probes_per_side; ++i) {
    const auto& c = set.crossings[rng.next_below(set.crossings.size())];
    ++report.exterior_checked;
    if (eval(add(set.center, scale(c.dir, 1.1 * c.r_out))) > set.lambda) ++report.exterior_failures;
  }
  return report;
}

// --- one-stop level-set bounds -------------------------------------------------------

namespace {

LevelSetResult bounds_from_rays(const MaximalEvaluator& eval, const RadialProfile& profile,
                                double lambda, const Point& center, const LevelSetOptions& options) {
  RayTraceOptions ray = options.ray;
  ray.threads = options.threads;
  LevelSetResult result;
  result.set = superlevel_boundary_rays(eval, lambda, center,
                                        ray_directions(center.dim, options.directions), ray);
  result.bounds = capacity_bounds(result.set, profile);
  SplitMix64 rng = SplitMix64(options.seed).fork(std::bit_cast<std::uint64_t>(lambda));
  result.probe = probe_level_set(result.set, eval, rng, options.probes);
  return result;
}

LevelSetResult bounds_from_cells(const MaximalField& mfield, const RadialProfile& profile,
                                 double lambda) {
  LevelSetResult result;
  result.set = superlevel_cells(mfield, lambda);
  if (result.set.empty()) return result;  // capacity of the empty set is 0
  result.bounds = capacity_bounds(result.set, profile);
  return result;
}

bool cells_feasible(const RadialProfile& profile, double mass, double lambda, const Grid& grid,
                    const Point& center, double fraction) {
  const double r_est = inverse_ball_capacity(profile, mass / lambda);
  return r_est <= fraction * grid.inradius_from(center);
}

}  // namespace

LevelSetResult level_set_bounds(const AtomicMeasure& nu, const RadialProfile& profile, double lambda,
                                const LevelSetOptions& options, const Grid* eval_grid) {
  const Point center = options.center.value_or(nu.centroid());
  bool use_cells = options.mode == LevelSetOptions::Mode::cells;
  if (options.mode == LevelSetOptions::Mode::automatic && eval_grid != nullptr)
    use_cells = cells_feasible(profile, nu.total_mass, lambda, *eval_grid, center,
                               options.cells_fraction);
  if (use_cells) {
    if (eval_grid == nullptr) throw std::invalid_argument("cells mode needs an evaluation grid");
    if (options.precomputed_grid_field != nullptr)
      return bounds_from_cells(*options.precomputed_grid_field, profile, lambda);
    std::vector<Point> pts(static_cast<std::size_t>(eval_grid->cell_count()));
    for (std::size_t i = 0; i < pts.size(); ++i)
      pts[i] = eval_grid->cell_center(static_cast<std::int64_t>(i));
    MaximalField mf = maximal_field_measure(nu, profile, pts, options.threads);
    mf.grid = *eval_grid;
    return bounds_from_cells(mf, profile, lambda);
  }
  MaximalEvaluator eval(nu, profile);
  return bounds_from_rays(eval, profile, lambda, center, options);
}

LevelSetResult level_set_bounds(const FieldAccumulator& acc, const RadialProfile& profile,
                                double lambda, const LevelSetOptions& options) {
  const Point center = options.center.value_or(acc.centroid());
  bool use_cells = options.mode == LevelSetOptions::Mode::cells;
  if (options.mode == LevelSetOptions::Mode::automatic)
    use_cells = cells_feasible(profile, acc.total_mass(), lambda, acc.grid(), center,
                               options.cells_fraction);
  MaximalEvaluator eval(acc, profile, options.field_policy);
  if (use_cells) {
    if (options.precomputed_grid_field != nullptr)
      return bounds_from_cells(*options.precomputed_grid_field, profile, lambda);
    const MaximalField mf = maximal_field_grid(acc, profile, options.field_policy, options.threads);
    return bounds_from_cells(mf, profile, lambda);
  }
  return bounds_from_rays(eval, profile, lambda, center, options);
}

// --- weak (1,1) bound --------------------------------------------------------------

WeakBoundReport weak11_bound_check(const AtomicMeasure& nu, const RadialProfile& profile,
                                   const std::vector<double>& lambdas, const LevelSetOptions& options,
                                   const Grid* eval_grid) {
  WeakBoundReport report;
  report.gamma = scaling_envelope(profile).psi(3.0);
  report.mass = nu.total_mass;
  const double budget = report.gamma * report.mass;
  for (double lambda : lambdas) {
    const LevelSetResult r = level_set_bounds(nu, profile, lambda, options, eval_grid);
    WeakBoundEntry e;
    e.lambda = lambda;
    e.upper = r.bounds.upper;
    e.lambda_times_upper = lambda * r.bounds.upper;
    e.ok = e.lambda_times_upper <= budget * (1.0 + 1e-12);
    report.best_constant = std::max(report.best_constant, e.lambda_times_upper / report.mass);
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace capmax
