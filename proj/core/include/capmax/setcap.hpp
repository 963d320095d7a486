// Superlevel sets E_lambda = {M_C > lambda} and certified capacity bounds.
//
// The capacity of a general set is not computable from a radial ball profile
// alone, so E_lambda is bracketed using only the capacity axioms:
//   lower bound   c(radius of an inscribed ball)        (monotonicity)
//   upper bound   min( c(radius of an enclosing ball),
//                      sum of c(r_j) over a covering ball family )
//                                                        (monotonicity + subadditivity)
// Two set representations are supported: grid cells whose maximal value
// exceeds lambda, and per-direction boundary radii traced along rays from a
// center (the only representation that survives lambda -> 0, where the set
// radius grows like c^{-1}(1/lambda)).
//
// The greedy disjoint subfamily implements the covering-lemma selection:
// repeatedly take the largest remaining ball disjoint from the selection;
// every input ball then meets a selected ball of at least its radius, so the
// 3-dilates of the selection cover the union of the family.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capmax/capacity.hpp"
#include "capmax/geometry.hpp"
#include "capmax/maximal.hpp"
#include "capmax/rng.hpp"
#include "capmax/sampling.hpp"

namespace capmax {

struct RayCrossing {
  Point dir;          // unit direction from the center
  double r_in = 0.0;  // M > lambda at center + r_in * dir
  double r_out = 0.0; // M <= lambda at center + r_out * dir, r_out - r_in <= tol * r_out
};

struct LevelSetApprox {
  double lambda = 0.0;
  enum class Rep { cells, rays } rep = Rep::cells;
  // cells representation
  Grid grid;
  std::vector<std::int64_t> cell_ids;
  // rays representation
  Point center;
  std::vector<RayCrossing> crossings;
  std::string source;

  bool empty() const {
    return rep == Rep::cells ? cell_ids.empty() : crossings.empty();
  }
};

// Cells of a full-grid maximal field whose value exceeds lambda
// (+infinity values always qualify).
LevelSetApprox superlevel_cells(const MaximalField& mfield, double lambda);

struct RayTraceOptions {
  double rel_tol = 1e-6;    // bracket width tolerance, relative to r_out
  double outer_cap = 1e6;   // march cap in length units
  int max_bisections = 200;
  int threads = 1;  // directions are independent work items
};

// Traces the outermost lambda-crossing along each direction.  The march
// starts at the certified cap R_support + c^{-1}(mass/lambda), where
// M <= mass / c(dist to support) <= lambda, and halves inward until the
// value exceeds lambda; bisection then tightens the bracket.
// Throws std::domain_error when M(center) <= lambda and std::runtime_error
// (naming the direction) when no bracket exists below the cap.
LevelSetApprox superlevel_boundary_rays(const MaximalEvaluator& eval, double lambda,
                                        const Point& center, const std::vector<Point>& directions,
                                        const RayTraceOptions& options = {});

// +-e1 in dimension 1, `count` uniformly spaced angles in dimension 2.
std::vector<Point> ray_directions(int dim, int count);

// Exact minimal enclosing ball (dimension <= 2), randomized incremental
// construction with a deterministic seeded shuffle.
Ball minimal_enclosing_ball(const std::vector<Point>& points, std::uint64_t seed = 0x9d2c5680u);

// Squared exterior distance transform: per cell, the squared distance (in
// length units) from its center to the nearest source-cell center.  Used for
// the largest inscribed ball.
std::vector<double> squared_distance_transform(const Grid& grid, const std::vector<char>& source);

// Largest ball certified to lie inside the set; see the representation notes.
Ball inscribed_ball(const LevelSetApprox& set, const std::optional<Point>& center_hint = {});

// Smallest ball certified to contain the set (cell circumradius padding in
// cells mode).  Throws std::domain_error on an empty set.
Ball enclosing_ball(const LevelSetApprox& set);

struct CapacityBounds {
  double lower = 0.0;
  double upper = 0.0;
  Ball witness_lower;
  Ball witness_enclosing;
  std::vector<Ball> witness_cover;  // covering family behind the subadditive bound
};

CapacityBounds capacity_bounds(const LevelSetApprox& set, const RadialProfile& profile);

struct BallFamily {
  std::vector<Ball> balls;
  double dilation = 3.0;
};

// Largest-radius-first greedy selection of pairwise disjoint balls; ties are
// broken by lexicographic center for determinism.
BallFamily greedy_disjoint_subfamily(const BallFamily& family);

struct CoverageReport {
  std::size_t probes = 0;
  std::size_t misses = 0;  // probe in the union but in no dilated selected ball
  bool pass() const { return misses == 0; }
};

// Monte-Carlo check that the dilated selection covers the union of the
// family: rejection-samples `probes` points of the union from the bounding
// box and tests membership in some dilation * selected ball.
CoverageReport check_dilate_coverage(const BallFamily& family, const BallFamily& selection,
                                     std::size_t probes, SplitMix64& rng);

BallFamily random_ball_family(std::size_t count, int dim, double box_half_width, double r_min,
                              double r_max, SplitMix64& rng);

struct ProbeReport {
  std::size_t interior_checked = 0;
  std::size_t interior_failures = 0;  // M <= lambda at 0.9 * r_in
  std::size_t exterior_checked = 0;
  std::size_t exterior_failures = 0;  // M > lambda at 1.1 * r_out
  bool pass() const { return interior_failures == 0 && exterior_failures == 0; }
};

// Validates a ray-traced set by sampling M at interior (0.9 r_in) and
// exterior (1.1 r_out) points along seeded random sampled directions.
ProbeReport probe_level_set(const LevelSetApprox& set, const MaximalEvaluator& eval, SplitMix64& rng,
                            std::size_t probes_per_side = 32);

struct LevelSetOptions {
  enum class Mode { automatic, cells, rays } mode = Mode::automatic;
  int directions = 64;
  RayTraceOptions ray;
  RadiusPolicy field_policy;       // field-mode evaluation policy
  double cells_fraction = 0.5;     // cells mode iff c^{-1}(mass/lambda) <= fraction * box inradius
  std::optional<Point> center;     // ray center override (default: mass centroid)
  std::uint64_t seed = 1;
  std::size_t probes = 32;
  const MaximalField* precomputed_grid_field = nullptr;  // reuse across lambdas
  int threads = 1;
};

struct LevelSetResult {
  LevelSetApprox set;
  CapacityBounds bounds;
  ProbeReport probe;
};

// One-stop construction: picks cells or rays mode, builds the set, bounds it
// and (rays mode) probe-validates it.
LevelSetResult level_set_bounds(const AtomicMeasure& nu, const RadialProfile& profile, double lambda,
                                const LevelSetOptions& options, const Grid* eval_grid = nullptr);
LevelSetResult level_set_bounds(const FieldAccumulator& acc, const RadialProfile& profile,
                                double lambda, const LevelSetOptions& options);

struct WeakBoundEntry {
  double lambda = 0.0;
  double upper = 0.0;           // upper capacity bound of E_lambda
  double lambda_times_upper = 0.0;
  bool ok = false;
};

struct WeakBoundReport {
  double gamma = 0.0;  // psi(3): the covering-chain constant
  double mass = 0.0;
  double best_constant = 0.0;  // max over lambda of lambda * upper / mass
  std::vector<WeakBoundEntry> entries;
  bool pass() const {
    for (const auto& e : entries)
      if (!e.ok) return false;
    return !entries.empty();
  }
};

// Checks lambda * upper(E_lambda) <= psi(3) * nu(R^n) for every lambda.
WeakBoundReport weak11_bound_check(const AtomicMeasure& nu, const RadialProfile& profile,
                                   const std::vector<double>& lambdas, const LevelSetOptions& options,
                                   const Grid* eval_grid = nullptr);

}  // namespace capmax
