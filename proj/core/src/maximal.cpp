#include "capmax/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "capmax/parallel.hpp"

namespace capmax {

namespace {

struct DistWeight {
  double d;
  double w;
};

// Distance-sorted atom list with cumulative weights; the exact centered
// supremum scans the group ends.
MaximalWitness scan_distances(std::vector<DistWeight>& dw, const RadialProfile& profile) {
  std::sort(dw.begin(), dw.end(), [](const DistWeight& a, const DistWeight& b) { return a.d < b.d; });
  MaximalWitness best;
  double cum = 0.0;
  for (std::size_t i = 0; i < dw.size(); ++i) {
    cum += dw[i].w;
    if (i + 1 < dw.size() && dw[i + 1].d == dw[i].d) continue;  // close the tie group first
    if (dw[i].d == 0.0) {
      if (cum > 0.0) return {kInfinity, 0.0, cum};
      continue;
    }
    if (cum <= 0.0) continue;
    const double v = cum / ball_capacity(profile, dw[i].d);
    if (v > best.value) {
      best.value = v;
      best.best_radius = dw[i].d;
      best.best_mass = cum;
    }
  }
  return best;
}

MaximalWitness witness_from_center(const AtomicMeasure& nu, const RadialProfile& profile,
                                   const Point& center) {
  std::vector<DistWeight> dw(nu.atom_count());
  for (std::size_t i = 0; i < nu.atom_count(); ++i)
    dw[i] = {distance(nu.position(i), center), nu.weights[i]};
  return scan_distances(dw, profile);
}

}  // namespace

MaximalWitness maximal_witness_measure(const AtomicMeasure& nu, const RadialProfile& profile,
                                       const Point& x) {
  return witness_from_center(nu, profile, x);
}

double maximal_at_point_measure(const AtomicMeasure& nu, const RadialProfile& profile, const Point& x) {
  return witness_from_center(nu, profile, x).value;
}

MaximalField maximal_field_measure(const AtomicMeasure& nu, const RadialProfile& profile,
                                   const std::vector<Point>& eval_points, int threads) {
  MaximalField out;
  out.points = eval_points;
  out.values.resize(eval_points.size());
  out.mode = MaximalMode::centered;
  parallel_for(eval_points.size(), threads, [&](std::size_t i) {
    out.values[i] = maximal_at_point_measure(nu, profile, eval_points[i]);
  });
  return out;
}

// --- FieldAccumulator -------------------------------------------------------

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone-chain convex hull; input points need not be unique.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) { return a[0] == b[0] && a[1] == b[1]; }),
            pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Point> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

FieldAccumulator::FieldAccumulator(const ScalarField& field) : grid_(field.grid) {
  const auto nx = grid_.cells_x();
  const auto ny = grid_.cells_y();
  row_prefix_.assign(static_cast<std::size_t>((nx + 1) * ny), 0.0);
  const double vol = grid_.cell_volume();

  // Per-row extreme support cells carry the hull; interior cells of a row
  // cannot be hull vertices.
  std::vector<Point> extremes;
  double mass = 0.0;
  centroid_.dim = grid_.dim;
  for (std::int64_t iy = 0; iy < ny; ++iy) {
    double run = 0.0;
    std::int64_t first = -1, last = -1;
    const std::size_t base = static_cast<std::size_t>(iy * (nx + 1));
    for (std::int64_t ix = 0; ix < nx; ++ix) {
      const double s = field.samples[static_cast<std::size_t>(iy * nx + ix)];
      if (s < 0.0) throw std::invalid_argument("field samples must be nonnegative");
      row_prefix_[base + static_cast<std::size_t>(ix)] = run;
      run += s;
      mass += s * vol;
      if (s > 0.0) {
        const Point c = grid_.cell_center(iy * nx + ix);
        for (int a = 0; a < grid_.dim; ++a) centroid_[a] += s * vol * c[a];
        if (first < 0) first = ix;
        last = ix;
      }
    }
    row_prefix_[base + static_cast<std::size_t>(nx)] = run;
    if (first >= 0) {
      extremes.push_back(grid_.cell_center(iy * nx + first));
      if (last != first) extremes.push_back(grid_.cell_center(iy * nx + last));
    }
  }
  total_mass_ = mass;
  if (mass > 0.0)
    for (int a = 0; a < grid_.dim; ++a) centroid_[a] /= mass;
  has_support_ = !extremes.empty();
  if (!has_support_) return;

  if (grid_.dim == 1) {
    auto [lo, hi] = std::minmax_element(extremes.begin(), extremes.end(),
                                        [](const Point& a, const Point& b) { return a[0] < b[0]; });
    hull_ = {*lo, *hi};
  } else {
    hull_ = convex_hull(extremes);
  }

  // Bounding ball from the hull bounding box.
  double lo[kMaxDim], hi[kMaxDim];
  for (int a = 0; a < grid_.dim; ++a) {
    lo[a] = hi[a] = hull_.front()[a];
  }
  for (const Point& p : hull_)
    for (int a = 0; a < grid_.dim; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  bound_center_.dim = grid_.dim;
  for (int a = 0; a < grid_.dim; ++a) bound_center_[a] = 0.5 * (lo[a] + hi[a]);
  for (const Point& p : hull_) bound_radius_ = std::max(bound_radius_, distance(p, bound_center_));
}

double FieldAccumulator::ball_mass(const Point& x, double r) const {
  if (r < 0.0) return 0.0;
  const auto nx = grid_.cells_x();
  const double h = grid_.h;
  const double vol = grid_.cell_volume();

  auto row_sum = [&](std::int64_t iy, double cx, double half) -> double {
    std::int64_t jlo = static_cast<std::int64_t>(std::ceil((cx - half - grid_.origin[0]) / h - 0.5));
    std::int64_t jhi = static_cast<std::int64_t>(std::floor((cx + half - grid_.origin[0]) / h - 0.5));
    jlo = std::max<std::int64_t>(jlo, 0);
    jhi = std::min<std::int64_t>(jhi, nx - 1);
    if (jlo > jhi) return 0.0;
    const std::size_t base = static_cast<std::size_t>(iy * (nx + 1));
    return row_prefix_[base + static_cast<std::size_t>(jhi + 1)] -
           row_prefix_[base + static_cast<std::size_t>(jlo)];
  };

  if (grid_.dim == 1) return vol * row_sum(0, x[0], r);

  const auto ny = grid_.cells_y();
  std::int64_t ylo = static_cast<std::int64_t>(std::ceil((x[1] - r - grid_.origin[1]) / h - 0.5));
  std::int64_t yhi = static_cast<std::int64_t>(std::floor((x[1] + r - grid_.origin[1]) / h - 0.5));
  ylo = std::max<std::int64_t>(ylo, 0);
  yhi = std::min<std::int64_t>(yhi, ny - 1);
  double sum = 0.0;
  for (std::int64_t iy = ylo; iy <= yhi; ++iy) {
    const double cy = grid_.origin[1] + (static_cast<double>(iy) + 0.5) * h;
    const double dy = cy - x[1];
    const double rem = r * r - dy * dy;
    if (rem < 0.0) continue;
    sum += row_sum(iy, x[0], std::sqrt(rem));
  }
  return vol * sum;
}

double FieldAccumulator::cover_radius(const Point& x) const {
  double far = 0.0;
  for (const Point& p : hull_) far = std::max(far, distance(p, x));
  return far;
}

double FieldAccumulator::support_clearance(const Point& x) const {
  if (!has_support_) return kInfinity;
  return std::max(0.0, distance(x, bound_center_) - bound_radius_);
}

// --- field-mode point evaluation -------------------------------------------

namespace {

struct BestRadius {
  double value = 0.0;
  double radius = 0.0;
};

// Every counted cell (center within r) lies inside the ball of radius
// r + cell circumradius, so the ratio uses the padded capacity.  This keeps
// the evaluation a faithful approximation of the continuum value: the raw
// step-function ratio spikes by O(1) at radii comparable to the spacing
// because boundary cells enter with full weight.
double cell_pad(const Grid& grid) {
  return 0.5 * grid.h * std::sqrt(static_cast<double>(grid.dim));
}

void consider(const FieldAccumulator& acc, const RadialProfile& profile, const Point& x, double r,
              double pad, BestRadius& best) {
  if (!(r > 0.0)) return;
  const double m = acc.ball_mass(x, r);
  if (m <= 0.0) return;
  const double v = m / ball_capacity(profile, r + pad);
  if (v > best.value) {
    best.value = v;
    best.radius = r;
  }
}

}  // namespace

double maximal_at_point_field(const FieldAccumulator& acc, const RadialProfile& profile,
                              const Point& x, const RadiusPolicy& policy) {
  if (policy.kind == RadiusPolicy::Kind::atom_distances)
    throw std::invalid_argument("atom_distances policy needs the ScalarField overload");
  if (!acc.has_support()) return 0.0;
  if (policy.count < 2) throw std::invalid_argument("radius lattice needs at least 2 entries");

  const double cover = acc.cover_radius(x);
  double r_lo = policy.r_min > 0.0 ? policy.r_min : std::max(acc.grid().h, acc.support_clearance(x));
  double r_hi = policy.r_max > 0.0 ? policy.r_max : cover;
  r_lo = std::min(r_lo, cover);
  if (!(r_lo > 0.0)) r_lo = std::min(acc.grid().h, cover) * 0.5;
  if (!(r_hi > r_lo)) r_hi = r_lo * (1.0 + 1e-9);

  const double pad = cell_pad(acc.grid());
  BestRadius best;
  const double step = std::log(r_hi / r_lo) / (policy.count - 1);
  for (int i = 0; i < policy.count; ++i) {
    const double r = r_lo * std::exp(step * i);
    consider(acc, profile, x, r, pad, best);
  }
  // Local refinement around the best lattice radius, clamped to [r_lo, r_hi].
  double left = std::max(r_lo, best.radius * std::exp(-step));
  double right = std::min(r_hi, best.radius * std::exp(step));
  for (int round = 0; round < policy.refine_rounds && best.radius > 0.0 && right > left; ++round) {
    const double lstep = std::log(right / left) / 10.0;
    BestRadius local = best;
    for (int i = 0; i <= 10; ++i) consider(acc, profile, x, left * std::exp(lstep * i), pad, local);
    left = std::max(r_lo, local.radius * std::exp(-lstep));
    right = std::min(r_hi, local.radius * std::exp(lstep));
    best = local;
  }
  if (policy.include_support_cover && cover > 0.0) {
    const double v = acc.total_mass() / ball_capacity(profile, cover + pad);
    if (v > best.value) best.value = v;
  }
  return best.value;
}

double maximal_at_point_field(const ScalarField& field, const RadialProfile& profile, const Point& x,
                              const RadiusPolicy& policy) {
  if (policy.kind == RadiusPolicy::Kind::atom_distances)
    return maximal_at_point_measure(field_to_measure(field), profile, x);
  FieldAccumulator acc(field);
  return maximal_at_point_field(acc, profile, x, policy);
}

MaximalField maximal_field_grid(const FieldAccumulator& acc, const RadialProfile& profile,
                                const RadiusPolicy& policy, int threads) {
  MaximalField out;
  const auto count = acc.grid().cell_count();
  out.points.resize(static_cast<std::size_t>(count));
  out.values.resize(static_cast<std::size_t>(count));
  out.mode = MaximalMode::centered;
  out.grid = acc.grid();
  parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t i) {
    out.points[i] = acc.grid().cell_center(static_cast<std::int64_t>(i));
    out.values[i] = maximal_at_point_field(acc, profile, out.points[i], policy);
  });
  return out;
}

// --- evaluator dispatch ------------------------------------------------------

MaximalEvaluator::MaximalEvaluator(const AtomicMeasure& nu, const RadialProfile& profile)
    : nu_(&nu), profile_(&profile) {
  support_center_.dim = nu.dim;
  if (nu.atom_count() > 0) {
    double lo[kMaxDim], hi[kMaxDim];
    bool seen = false;
    for (std::size_t i = 0; i < nu.atom_count(); ++i) {
      if (nu.weights[i] <= 0.0) continue;
      const Point p = nu.position(i);
      if (!seen) {
        for (int a = 0; a < nu.dim; ++a) lo[a] = hi[a] = p[a];
        seen = true;
      }
      for (int a = 0; a < nu.dim; ++a) {
        lo[a] = std::min(lo[a], p[a]);
        hi[a] = std::max(hi[a], p[a]);
      }
    }
    if (seen) {
      for (int a = 0; a < nu.dim; ++a) support_center_[a] = 0.5 * (lo[a] + hi[a]);
      support_radius_ = nu.support_radius(support_center_);
    }
  }
}

MaximalEvaluator::MaximalEvaluator(const FieldAccumulator& acc, const RadialProfile& profile,
                                   RadiusPolicy policy)
    : acc_(&acc), profile_(&profile), policy_(policy) {
  support_center_ = acc.support_ball_center();
  support_radius_ = acc.support_ball_radius();
}

double MaximalEvaluator::operator()(const Point& x) const {
  if (nu_ != nullptr) return maximal_at_point_measure(*nu_, *profile_, x);
  return maximal_at_point_field(*acc_, *profile_, x, policy_);
}

double MaximalEvaluator::mass() const { return nu_ != nullptr ? nu_->total_mass : acc_->total_mass(); }

Point MaximalEvaluator::support_center() const { return support_center_; }
double MaximalEvaluator::support_radius() const { return support_radius_; }

// --- scaling sandwich ---------------------------------------------------------

SandwichReport sandwich_check(const AtomicMeasure& nu, const RadialProfile& profile, double t,
                              const std::vector<Point>& points, double rel_tol) {
  if (!(t > 0.0)) throw std::domain_error("sandwich scale must be positive");
  const AtomicMeasure nu_t = scale_measure(nu, t);
  const ScalingEnvelope env = scaling_envelope(profile);
  const double phi_t = env.phi(t);
  const double psi_t = env.psi(t);

  SandwichReport report;
  report.t = t;
  report.checked = points.size();
  for (const Point& x : points) {
    const double mid = maximal_at_point_measure(nu_t, profile, x);
    const double base = maximal_at_point_measure(nu, profile, scale(x, 1.0 / t));
    double excess = 0.0;
    if (std::isinf(base) || std::isinf(mid)) {
      if (std::isinf(base) != std::isinf(mid)) excess = kInfinity;
    } else {
      const double lower = base / psi_t;
      const double upper = base / phi_t;
      if (mid < lower) excess = std::max(excess, (lower - mid) / std::max(lower, 1e-300));
      if (mid > upper) excess = std::max(excess, (mid - upper) / std::max(upper, 1e-300));
    }
    if (excess > rel_tol) {
      ++report.violations;
      if (report.worst.size() < 16) {
        const double lower = std::isinf(base) ? base : base / psi_t;
        const double upper = std::isinf(base) ? base : base / phi_t;
        report.worst.push_back({x, lower, mid, upper, excess});
      }
    }
    report.max_relative_excess = std::max(report.max_relative_excess, excess);
  }
  return report;
}

// --- uncentered variant --------------------------------------------------------

namespace {

double uncentered_from_center(const AtomicMeasure& nu, const RadialProfile& profile, const Point& c,
                              double r_min) {
  std::vector<DistWeight> dw(nu.atom_count());
  for (std::size_t i = 0; i < nu.atom_count(); ++i)
    dw[i] = {distance(nu.position(i), c), nu.weights[i]};
  std::sort(dw.begin(), dw.end(), [](const DistWeight& a, const DistWeight& b) { return a.d < b.d; });
  double best = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < dw.size(); ++i) {
    cum += dw[i].w;
    if (i + 1 < dw.size() && dw[i + 1].d == dw[i].d) continue;
    if (cum <= 0.0) continue;
    const double rho = std::max(dw[i].d, r_min);  // the ball must still contain x
    if (rho == 0.0) return kInfinity;
    best = std::max(best, cum / ball_capacity(profile, rho));
  }
  return best;
}

}  // namespace

double uncentered_maximal_at_point(const AtomicMeasure& nu, const RadialProfile& profile,
                                   const Point& x, const UncenteredPolicy& policy) {
  if (policy.max_centers < 1) throw std::invalid_argument("uncentered search budget must be positive");
  double best = uncentered_from_center(nu, profile, x, 0.0);  // centered balls are admissible
  int used = 1;
  for (std::size_t i = 0; i < nu.atom_count() && used < policy.max_centers; ++i, ++used) {
    const Point a = nu.position(i);
    best = std::max(best, uncentered_from_center(nu, profile, a, distance(a, x)));
  }
  for (std::size_t i = 0; i < nu.atom_count() && used < policy.max_centers; ++i, ++used) {
    const Point m = scale(add(nu.position(i), x), 0.5);
    best = std::max(best, uncentered_from_center(nu, profile, m, distance(m, x)));
  }
  return best;
}

double uncentered_maximal_at_point(const FieldAccumulator& acc, const RadialProfile& profile,
                                   const Point& x, const UncenteredPolicy& policy) {
  if (!acc.has_support()) return 0.0;
  std::vector<Point> centers = {x, acc.support_ball_center(),
                                scale(add(x, acc.support_ball_center()), 0.5)};
  const double pad = cell_pad(acc.grid());
  double best = 0.0;
  int used = 0;
  for (const Point& c : centers) {
    if (used++ >= policy.max_centers) break;
    const double r_min = distance(c, x);
    const double cover = acc.cover_radius(c);
    const double lo = std::max({acc.grid().h, acc.support_clearance(c), r_min, 1e-300});
    const double hi = std::max(cover, lo * (1.0 + 1e-9));
    const double step = std::log(hi / lo) / std::max(1, policy.lattice_count - 1);
    for (int i = 0; i < policy.lattice_count; ++i) {
      const double r = lo * std::exp(step * i);
      const double m = acc.ball_mass(c, r);
      if (m > 0.0) best = std::max(best, m / ball_capacity(profile, r + pad));
    }
    if (cover >= r_min && cover > 0.0)
      best = std::max(best, acc.total_mass() / ball_capacity(profile, cover + pad));
  }
  return best;
}

// --- upper-semicontinuity margin ------------------------------------------------

double openness_radius(const AtomicMeasure& nu, const RadialProfile& profile, const Point& x,
                       double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("openness threshold must be positive");
  const MaximalWitness w = maximal_witness_measure(nu, profile, x);
  if (!(w.value > lambda)) return 0.0;
  if (std::isinf(w.value)) {
    // Atom of weight w0 at x: every z has M(z) >= w0 / c(|z - x|).
    return inverse_ball_capacity(profile, 0.5 * w.best_mass / lambda);
  }
  // Enlarge the maximizing ball to radius s with c(s) the geometric mean of
  // c(r*) and mass/lambda; then B(z, s) contains the maximizing ball for all
  // |z - x| < s - r*, and mass/c(s) = sqrt(lambda M(x)) > lambda.
  const double target = std::sqrt(ball_capacity(profile, w.best_radius) * (w.best_mass / lambda));
  const double s = inverse_ball_capacity(profile, target);
  return std::max(0.0, s - w.best_radius);
}

}  // namespace capmax
