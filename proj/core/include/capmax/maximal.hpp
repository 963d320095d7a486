// Capacitary maximal functions M_C nu and M_C f.
//
// Default operator is the centered one: the supremum of nu(B(x, r))/c(r)
// over r > 0.  For an atomic measure this supremum is computed exactly:
// nu(closed B(x, r)) is a right-continuous step function jumping only at the
// atom distances d_i, and c is continuous and increasing, so the supremum is
// max_i W_i / c(d_i) with W_i the cumulative weight at distance d_i.  An atom
// sitting at x itself gives +infinity because c(0+) = 0.
//
// Grid fields are evaluated against a precomputed per-row prefix-sum
// accumulator: a ball integral is one interval query per intersected row
// (one query total in dimension 1).  A cell belongs to a ball iff its center
// does; the ratio divides by the capacity of the padded ball (radius plus the
// cell circumradius) that contains every counted cell, which keeps the value
// faithful to the continuum at radii comparable to the spacing.  The covering
// radius (distance from the query point to the farthest support cell center)
// is always a candidate: there the integral equals the total mass exactly and
// the ratio dominates all larger radii.
//
// The uncentered variant maximizes over candidate ball centers as well and
// returns a lower bound of the true uncentered supremum; it always dominates
// the centered value because the centered balls form a subset.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "capmax/capacity.hpp"
#include "capmax/geometry.hpp"
#include "capmax/sampling.hpp"

namespace capmax {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class MaximalMode { centered, uncentered_approx };

struct MaximalField {
  std::vector<Point> points;
  std::vector<double> values;  // >= 0, possibly +infinity at atoms
  MaximalMode mode = MaximalMode::centered;
  std::optional<Grid> grid;  // set when points are the full grid in linear order
};

struct RadiusPolicy {
  enum class Kind { atom_distances, lattice } kind = Kind::lattice;
  double r_min = 0.0;  // 0 = auto (cell spacing)
  double r_max = 0.0;  // 0 = auto (grid diagonal, extended to reach the support)
  int count = 256;     // geometric lattice size
  bool include_support_cover = true;
  int refine_rounds = 2;  // local geometric refinement around the best lattice radius
};

// Exact centered evaluation for an atomic measure.
double maximal_at_point_measure(const AtomicMeasure& nu, const RadialProfile& profile, const Point& x);

struct MaximalWitness {
  double value = 0.0;
  double best_radius = 0.0;  // maximizing closed-ball radius (0 when the value is +inf)
  double best_mass = 0.0;    // nu of that closed ball
};

MaximalWitness maximal_witness_measure(const AtomicMeasure& nu, const RadialProfile& profile,
                                       const Point& x);

MaximalField maximal_field_measure(const AtomicMeasure& nu, const RadialProfile& profile,
                                   const std::vector<Point>& eval_points, int threads = 1);

// Prefix-sum accumulator over a scalar field; build once, query many times.
class FieldAccumulator {
 public:
  explicit FieldAccumulator(const ScalarField& field);

  const Grid& grid() const { return grid_; }
  double total_mass() const { return total_mass_; }
  bool has_support() const { return has_support_; }
  Point centroid() const { return centroid_; }

  // Integral of the field over cells whose centers lie within r of x.
  double ball_mass(const Point& x, double r) const;
  // Exact distance from x to the farthest support cell center.
  double cover_radius(const Point& x) const;
  // Lower bound on the distance from x to the support (0 inside the support
  // bounding ball).
  double support_clearance(const Point& x) const;
  // M(z) <= total_mass / c(support_clearance(z)): a cheap upper envelope.
  Point support_ball_center() const { return bound_center_; }
  double support_ball_radius() const { return bound_radius_; }

 private:
  Grid grid_;
  std::vector<double> row_prefix_;  // (cells_x + 1) per row
  double total_mass_ = 0.0;
  bool has_support_ = false;
  std::vector<Point> hull_;  // support hull vertices (extremes in 1-D)
  Point bound_center_;
  double bound_radius_ = 0.0;
  Point centroid_;
};

double maximal_at_point_field(const FieldAccumulator& acc, const RadialProfile& profile,
                              const Point& x, const RadiusPolicy& policy);

// Convenience overload building a one-shot accumulator.
double maximal_at_point_field(const ScalarField& field, const RadialProfile& profile, const Point& x,
                              const RadiusPolicy& policy);

// Evaluates every cell center of the accumulator's grid.
MaximalField maximal_field_grid(const FieldAccumulator& acc, const RadialProfile& profile,
                                const RadiusPolicy& policy, int threads = 1);

// Centered evaluation dispatch used by the level-set machinery.
class MaximalEvaluator {
 public:
  MaximalEvaluator(const AtomicMeasure& nu, const RadialProfile& profile);
  MaximalEvaluator(const FieldAccumulator& acc, const RadialProfile& profile, RadiusPolicy policy);

  double operator()(const Point& x) const;
  double mass() const;
  // Support bounding ball (atoms or support cells) used for march caps.
  Point support_center() const;
  double support_radius() const;
  bool exact() const { return nu_ != nullptr; }
  const RadialProfile& profile() const { return *profile_; }

 private:
  const AtomicMeasure* nu_ = nullptr;
  const FieldAccumulator* acc_ = nullptr;
  const RadialProfile* profile_ = nullptr;
  RadiusPolicy policy_;
  Point support_center_;
  double support_radius_ = 0.0;
};

struct SandwichViolation {
  Point x;
  double lower = 0.0, mid = 0.0, upper = 0.0;
  double relative_excess = 0.0;
};

struct SandwichReport {
  double t = 1.0;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double max_relative_excess = 0.0;
  std::vector<SandwichViolation> worst;  // capped detail list

  bool pass() const { return violations == 0; }
};

// Exact check of M_C nu(x/t)/psi(t) <= M_C nu_t(x) <= M_C nu(x/t)/phi(t)
// at each point, flagging violations beyond `rel_tol`.
SandwichReport sandwich_check(const AtomicMeasure& nu, const RadialProfile& profile, double t,
                              const std::vector<Point>& points, double rel_tol = 1e-10);

struct UncenteredPolicy {
  int max_centers = 1024;  // search budget over candidate centers
  int lattice_count = 128; // field-mode radius lattice per center
};

double uncentered_maximal_at_point(const AtomicMeasure& nu, const RadialProfile& profile,
                                   const Point& x, const UncenteredPolicy& policy = {});
double uncentered_maximal_at_point(const FieldAccumulator& acc, const RadialProfile& profile,
                                   const Point& x, const UncenteredPolicy& policy = {});

// Upper-semicontinuity margin: a radius delta > 0 such that every z with
// |z - x| < delta satisfies M_C nu(z) > lambda, derived from the maximizing
// ball at x (0 when M_C nu(x) <= lambda).
double openness_radius(const AtomicMeasure& nu, const RadialProfile& profile, const Point& x,
                       double lambda);

}  // namespace capmax
