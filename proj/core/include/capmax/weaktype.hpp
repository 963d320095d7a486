// The weak-type curve h(lambda) = lambda * C({M_C > lambda}) and the checks
// built on it: the limiting value estimate, the tau-bracket containment, the
// small-t convergence of scaled measures, and empirical boundedness.
//
// h is carried as a per-lambda bracket [h_lower, h_upper] from the certified
// capacity bounds of the superlevel set.  No extrapolation model is fitted:
// the limit estimate is the bracket midpoint at the smallest lambda, with the
// bracket spread and the drift over the last decade reported as honesty
// indicators.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capmax/capacity.hpp"
#include "capmax/sampling.hpp"
#include "capmax/setcap.hpp"

namespace capmax {

struct CurveEntry {
  double lambda = 0.0;
  double h_lower = 0.0;
  double h_upper = 0.0;
  LevelSetApprox::Rep set_mode = LevelSetApprox::Rep::rays;
  double inscribed_radius = 0.0;
  double enclosing_radius = 0.0;
  CapacityBounds bounds;  // full witnesses behind the bracket
  ProbeReport probe;
};

struct WeakTypeCurve {
  std::vector<CurveEntry> entries;  // lambda strictly decreasing
  std::string input_descriptor;
  std::string profile_descriptor;
  double mass = 0.0;
  LevelSetApprox final_set;  // the set at the smallest lambda
};

// Geometric schedule from `from` down to `to`, `per_decade` points per
// factor-of-10; endpoints included.
std::vector<double> lambda_schedule(double from, double to, int per_decade);

WeakTypeCurve weaktype_curve(const AtomicMeasure& nu, const RadialProfile& profile,
                             const std::vector<double>& lambdas, const LevelSetOptions& options,
                             const Grid* eval_grid = nullptr);
WeakTypeCurve weaktype_curve(const ScalarField& field, const RadialProfile& profile,
                             const std::vector<double>& lambdas, const LevelSetOptions& options);

struct LimitEstimate {
  double value = 0.0;       // bracket midpoint at the smallest lambda
  double spread = 0.0;      // h_upper - h_lower there
  double trend = 0.0;       // |h(lambda_min) - h(10 lambda_min)|
  double lambda_min = 0.0;
};

// Requires at least 3 entries (throws std::domain_error otherwise).
LimitEstimate limit_estimate(const WeakTypeCurve& curve);

struct TauBracketReport {
  double tau = 1.0;
  double h_over_mass_lower = 0.0;  // h_lower(lambda_min) / mass
  double h_over_mass_upper = 0.0;
  double slack = 0.0;              // (spread + trend) / mass
  bool pass = false;
};

// Containment of h/mass at lambda_min in [1/tau - slack, tau + slack].  The
// slack combines the bound spread with the last-decade drift, so a curve that
// has not yet stabilized is judged against its own measured drift.
TauBracketReport tau_bracket_check(const WeakTypeCurve& curve, const ScalingEnvelope& envelope);

struct ScaledLimitEntry {
  double t = 1.0;
  double lower = 0.0;   // capacity bounds of {M_C nu_t > lambda}
  double upper = 0.0;
  double rel_err = 0.0; // max relative deviation of the bounds from 1/lambda
};

struct ScaledLimitReport {
  double lambda = 0.0;
  double target = 0.0;  // 1 / lambda
  std::vector<ScaledLimitEntry> entries;
  double final_rel_err = 0.0;
  bool monotone_improvement = true;
};

// Convergence of C({M_C nu_t > lambda}) to 1/lambda as t -> 0 for a
// unit-mass measure.
ScaledLimitReport scaled_measure_limit(const AtomicMeasure& nu, const RadialProfile& profile,
                                       double lambda, const std::vector<double>& t_schedule,
                                       const LevelSetOptions& options);

struct BoundednessReport {
  double lambda0 = 0.0;
  double a_emp = 0.0;      // min h_lower over entries with lambda < lambda0
  double gamma_emp = 0.0;  // max h_upper over those entries
  double gamma_budget = 0.0;  // psi(3) * mass
  std::size_t tail_entries = 0;
  bool insufficient_data = false;
  bool pass = false;  // a_emp > 0 and gamma_emp <= gamma_budget
};

BoundednessReport boundedness_check(const WeakTypeCurve& curve, const ScalingEnvelope& envelope,
                                    double lambda0 = 0.1);

}  // namespace capmax
