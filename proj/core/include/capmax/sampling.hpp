// Inputs of the maximal engine: grid-sampled nonnegative densities and
// finite atomic measures.  Fields carry the L^1 mass of their samples;
// atomic measures carry exact masses and admit exact maximal evaluation.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capmax/geometry.hpp"

namespace capmax {

struct Grid {
  int dim = 1;
  Point origin;                    // lower corner of the box
  double h = 1.0;                  // cell spacing
  std::array<std::int64_t, kMaxDim> extents{1, 1};  // cells per axis

  static Grid make(int dim, const Point& origin, double h,
                   std::array<std::int64_t, kMaxDim> extents,
                   std::int64_t cell_budget = (std::int64_t{1} << 24));
  // Symmetric box [-half_width, half_width]^dim around 0.
  static Grid centered(int dim, double half_width, double h,
                       std::int64_t cell_budget = (std::int64_t{1} << 24));

  std::int64_t cell_count() const;
  std::int64_t cells_x() const { return extents[0]; }
  std::int64_t cells_y() const { return dim > 1 ? extents[1] : 1; }

  // Linear index is x-fastest: id = ix + cells_x * iy.
  Point cell_center(std::int64_t id) const;
  std::int64_t cell_of(const Point& p) const;  // -1 when outside the box
  double cell_volume() const;
  double diagonal() const;
  Point box_center() const;
  double inradius_from(const Point& p) const;  // distance from p to the box boundary
};

struct ScalarField {
  Grid grid;
  std::vector<double> samples;  // one nonnegative value per cell, linear order
  std::optional<double> analytic_mass;
  std::string descriptor;
};

enum class FieldPreset { indicator_ball, gaussian, two_bumps };

struct PresetSpec {
  FieldPreset preset = FieldPreset::indicator_ball;
  double radius = 1.0;      // indicator_ball / two_bumps bump radius
  double sigma = 1.0;       // gaussian width
  double separation = 4.0;  // two_bumps center distance
};

// Samples the preset density at cell centers and records the analytic mass.
// Throws std::invalid_argument when the support does not fit in the grid box.
ScalarField make_field(const PresetSpec& spec, const Grid& grid);

// Sum of samples * h^dim in linear cell order (deterministic).
double field_mass(const ScalarField& field);

struct AtomicMeasure {
  int dim = 1;
  std::vector<double> positions;  // dim-strided coordinates
  std::vector<double> weights;
  double total_mass = 0.0;
  std::string descriptor;

  std::size_t atom_count() const { return weights.size(); }
  Point position(std::size_t i) const;
  void add_atom(const Point& p, double w);

  // Weighted centroid; the origin for a zero-mass measure.
  Point centroid() const;
  // Radius of the smallest ball around `center` containing all atoms.
  double support_radius(const Point& center) const;
};

AtomicMeasure delta_measure(int dim = 1);

// nu_t(E) = nu(E/t): atoms move to t*x with unchanged weights.  t must be > 0.
AtomicMeasure scale_measure(const AtomicMeasure& nu, double t);

// Weights divided by total mass; throws std::domain_error on zero mass.
AtomicMeasure normalize_measure(const AtomicMeasure& nu);

// One atom per nonzero cell, weight sample * h^dim, linear cell order.
// Total mass matches field_mass exactly.  Throws on a zero field.
AtomicMeasure field_to_measure(const ScalarField& field);

}  // namespace capmax
