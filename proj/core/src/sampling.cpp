#include "capmax/sampling.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "capmax/capacity.hpp"

namespace capmax {

Grid Grid::make(int dim, const Point& origin, double h, std::array<std::int64_t, kMaxDim> extents,
                std::int64_t cell_budget) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  Grid g;
  g.dim = dim;
  g.origin = origin;
  g.origin.dim = dim;
  g.h = h;
  g.extents = extents;
  if (dim == 1) g.extents[1] = 1;
  for (int i = 0; i < dim; ++i)
    if (g.extents[static_cast<std::size_t>(i)] < 1)
      throw std::invalid_argument("grid extents must be positive");
  if (g.cell_count() > cell_budget) throw std::invalid_argument("grid exceeds the cell budget");
  return g;
}

Grid Grid::centered(int dim, double half_width, double h, std::int64_t cell_budget) {
  if (!(half_width > 0.0)) throw std::invalid_argument("half width must be positive");
  const auto cells = static_cast<std::int64_t>(std::ceil(2.0 * half_width / h));
  Point origin = dim == 1 ? Point(-0.5 * cells * h) : Point(-0.5 * cells * h, -0.5 * cells * h);
  return make(dim, origin, h, {cells, cells}, cell_budget);
}

std::int64_t Grid::cell_count() const { return cells_x() * cells_y(); }

Point Grid::cell_center(std::int64_t id) const {
  const std::int64_t ix = id % cells_x();
  const std::int64_t iy = id / cells_x();
  Point p;
  p.dim = dim;
  p[0] = origin[0] + (static_cast<double>(ix) + 0.5) * h;
  if (dim > 1) p[1] = origin[1] + (static_cast<double>(iy) + 0.5) * h;
  return p;
}

std::int64_t Grid::cell_of(const Point& p) const {
  std::int64_t idx[kMaxDim] = {0, 0};
  for (int a = 0; a < dim; ++a) {
    const double f = (p[a] - origin[a]) / h;
    if (f < 0.0) return -1;
    const auto i = static_cast<std::int64_t>(f);
    if (i >= extents[static_cast<std::size_t>(a)]) return -1;
    idx[a] = i;
  }
  return idx[0] + cells_x() * idx[1];
}

double Grid::cell_volume() const { return dim == 1 ? h : h * h; }

double Grid::diagonal() const {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double side = static_cast<double>(extents[static_cast<std::size_t>(a)]) * h;
    s += side * side;
  }
  return std::sqrt(s);
}

Point Grid::box_center() const {
  Point c;
  c.dim = dim;
  for (int a = 0; a < dim; ++a)
    c[a] = origin[a] + 0.5 * static_cast<double>(extents[static_cast<std::size_t>(a)]) * h;
  return c;
}

double Grid::inradius_from(const Point& p) const {
  double m = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim; ++a) {
    const double hi = origin[a] + static_cast<double>(extents[static_cast<std::size_t>(a)]) * h;
    m = std::min(m, std::min(p[a] - origin[a], hi - p[a]));
  }
  return m;
}

namespace {

double preset_density(const PresetSpec& spec, int dim, const Point& x) {
  switch (spec.preset) {
    case FieldPreset::indicator_ball:
      return norm(x) <= spec.radius ? 1.0 : 0.0;
    case FieldPreset::gaussian: {
      const double s2 = spec.sigma * spec.sigma;
      const double normc = std::pow(2.0 * std::numbers::pi * s2, -0.5 * dim);
      return normc * std::exp(-0.5 * squared_distance(x, Point{}) / s2);
    }
    case FieldPreset::two_bumps: {
      Point c1, c2;
      c1.dim = c2.dim = dim;
      c1[0] = -0.5 * spec.separation;
      c2[0] = 0.5 * spec.separation;
      const bool in1 = distance(x, c1) <= spec.radius;
      const bool in2 = distance(x, c2) <= spec.radius;
      return (in1 || in2) ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

void check_support_fits(const PresetSpec& spec, const Grid& grid) {
  double needed = 0.0;
  switch (spec.preset) {
    case FieldPreset::indicator_ball:
      if (!(spec.radius > 0.0)) throw std::invalid_argument("indicator radius must be positive");
      needed = spec.radius;
      break;
    case FieldPreset::gaussian:
      if (!(spec.sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
      needed = 6.0 * spec.sigma;  // mass beyond 6 sigma is negligible at the stated tolerances
      break;
    case FieldPreset::two_bumps:
      if (!(spec.radius > 0.0) || !(spec.separation > 0.0))
        throw std::invalid_argument("two_bumps parameters must be positive");
      needed = 0.5 * spec.separation + spec.radius;
      break;
  }
  Point zero;
  zero.dim = grid.dim;
  if (grid.inradius_from(zero) < needed) {
    std::ostringstream os;
    os << "preset support (radius " << needed << ") exceeds the grid box";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

ScalarField make_field(const PresetSpec& spec, const Grid& grid) {
  Point zero;
  zero.dim = grid.dim;
  if (grid.inradius_from(zero) <= 0.0)
    throw std::invalid_argument("grid box must contain the origin for the built-in presets");
  check_support_fits(spec, grid);

  ScalarField f;
  f.grid = grid;
  f.samples.resize(static_cast<std::size_t>(grid.cell_count()));
  const std::int64_t count = grid.cell_count();
  for (std::int64_t id = 0; id < count; ++id)
    f.samples[static_cast<std::size_t>(id)] = preset_density(spec, grid.dim, grid.cell_center(id));

  const double omega = unit_ball_volume(grid.dim);
  std::ostringstream os;
  switch (spec.preset) {
    case FieldPreset::indicator_ball:
      f.analytic_mass = omega * std::pow(spec.radius, grid.dim);
      os << "indicator_ball(R=" << spec.radius << ")";
      break;
    case FieldPreset::gaussian:
      f.analytic_mass = 1.0;
      os << "gaussian(sigma=" << spec.sigma << ")";
      break;
    case FieldPreset::two_bumps:
      f.analytic_mass = 2.0 * omega * std::pow(spec.radius, grid.dim);
      os << "two_bumps(R=" << spec.radius << ", sep=" << spec.separation << ")";
      break;
  }
  os << " n=" << grid.dim;
  f.descriptor = os.str();
  return f;
}

// Accumulates sample * h^dim term by term in linear cell order, the exact
// summation field_to_measure reproduces (zero cells contribute an exact 0).
double field_mass(const ScalarField& field) {
  const double vol = field.grid.cell_volume();
  double s = 0.0;
  for (double v : field.samples) s += v * vol;
  return s;
}

Point AtomicMeasure::position(std::size_t i) const {
  Point p;
  p.dim = dim;
  for (int a = 0; a < dim; ++a) p[a] = positions[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)];
  return p;
}

void AtomicMeasure::add_atom(const Point& p, double w) {
  if (w < 0.0) throw std::invalid_argument("atom weights must be nonnegative");
  if (p.dim != dim) throw std::invalid_argument("atom dimension mismatch");
  for (int a = 0; a < dim; ++a) positions.push_back(p[a]);
  weights.push_back(w);
  total_mass += w;
}

Point AtomicMeasure::centroid() const {
  Point c;
  c.dim = dim;
  if (total_mass <= 0.0) return c;
  for (std::size_t i = 0; i < atom_count(); ++i)
    for (int a = 0; a < dim; ++a)
      c[a] += weights[i] * positions[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)];
  for (int a = 0; a < dim; ++a) c[a] /= total_mass;
  return c;
}

double AtomicMeasure::support_radius(const Point& center) const {
  double r = 0.0;
  for (std::size_t i = 0; i < atom_count(); ++i)
    if (weights[i] > 0.0) r = std::max(r, distance(position(i), center));
  return r;
}

AtomicMeasure delta_measure(int dim) {
  AtomicMeasure nu;
  nu.dim = dim;
  Point origin;
  origin.dim = dim;
  nu.add_atom(origin, 1.0);
  nu.descriptor = "delta_origin";
  return nu;
}

AtomicMeasure scale_measure(const AtomicMeasure& nu, double t) {
  if (!(t > 0.0)) throw std::domain_error("measure scale must be positive");
  AtomicMeasure out = nu;
  for (double& c : out.positions) c *= t;
  return out;
}

AtomicMeasure normalize_measure(const AtomicMeasure& nu) {
  if (!(nu.total_mass > 0.0)) throw std::domain_error("cannot normalize a zero-mass measure");
  AtomicMeasure out = nu;
  const double inv = 1.0 / nu.total_mass;
  for (double& w : out.weights) w *= inv;
  // Unit mass by definition; the weights sum to 1 within roundoff and the
  // cached aggregate carries the exact intended value.  A second normalize
  // multiplies every weight by exactly 1.0.
  out.total_mass = 1.0;
  return out;
}

AtomicMeasure field_to_measure(const ScalarField& field) {
  AtomicMeasure nu;
  nu.dim = field.grid.dim;
  nu.descriptor = field.descriptor;
  const double vol = field.grid.cell_volume();
  const std::int64_t count = field.grid.cell_count();
  bool any = false;
  for (std::int64_t id = 0; id < count; ++id) {
    const double s = field.samples[static_cast<std::size_t>(id)];
    if (s < 0.0) throw std::invalid_argument("field samples must be nonnegative");
    if (s == 0.0) continue;
    nu.add_atom(field.grid.cell_center(id), s * vol);
    any = true;
  }
  if (!any) throw std::domain_error("cannot convert a zero field to a measure");
  return nu;
}

}  // namespace capmax
