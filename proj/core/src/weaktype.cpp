#include "capmax/weaktype.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace capmax {

std::vector<double> lambda_schedule(double from, double to, int per_decade) {
  if (!(from > 0.0) || !(to > 0.0) || !(from > to))
    throw std::invalid_argument("lambda schedule needs from > to > 0");
  if (per_decade < 1) throw std::invalid_argument("lambda schedule needs per_decade >= 1");
  std::vector<double> out;
  const double step = std::pow(10.0, -1.0 / per_decade);
  double lam = from;
  while (lam > to * (1.0 + 1e-9)) {
    out.push_back(lam);
    lam *= step;
  }
  out.push_back(to);
  return out;
}

namespace {

CurveEntry entry_from_result(double lambda, const LevelSetResult& r) {
  CurveEntry e;
  e.lambda = lambda;
  e.h_lower = lambda * r.bounds.lower;
  e.h_upper = lambda * r.bounds.upper;
  e.set_mode = r.set.rep;
  e.inscribed_radius = r.bounds.witness_lower.radius;
  e.enclosing_radius = r.bounds.witness_enclosing.radius;
  e.bounds = r.bounds;
  e.probe = r.probe;
  return e;
}

void check_schedule(const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw std::invalid_argument("empty lambda schedule");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw std::invalid_argument("lambda values must be positive");
    if (i > 0 && !(lambdas[i] < lambdas[i - 1]))
      throw std::invalid_argument("lambda schedule must be strictly decreasing");
  }
}

}  // namespace

WeakTypeCurve weaktype_curve(const AtomicMeasure& nu, const RadialProfile& profile,
                             const std::vector<double>& lambdas, const LevelSetOptions& options,
                             const Grid* eval_grid) {
  check_schedule(lambdas);
  WeakTypeCurve curve;
  curve.input_descriptor = nu.descriptor;
  curve.profile_descriptor = profile.describe();
  curve.mass = nu.total_mass;

  // The full-grid maximal field is lambda-independent: build it once if any
  // cells-mode entry needs it.
  MaximalField grid_field;
  LevelSetOptions opts = options;
  for (double lambda : lambdas) {
    if (eval_grid != nullptr && opts.precomputed_grid_field == nullptr) {
      const Point center = opts.center.value_or(nu.centroid());
      const double r_est = inverse_ball_capacity(profile, nu.total_mass / lambda);
      const bool needs_cells = opts.mode == LevelSetOptions::Mode::cells ||
                               (opts.mode == LevelSetOptions::Mode::automatic &&
                                r_est <= opts.cells_fraction * eval_grid->inradius_from(center));
      if (needs_cells) {
        std::vector<Point> pts(static_cast<std::size_t>(eval_grid->cell_count()));
        for (std::size_t i = 0; i < pts.size(); ++i)
          pts[i] = eval_grid->cell_center(static_cast<std::int64_t>(i));
        grid_field = maximal_field_measure(nu, profile, pts, opts.threads);
        grid_field.grid = *eval_grid;
        opts.precomputed_grid_field = &grid_field;
      }
    }
    const LevelSetResult result = level_set_bounds(nu, profile, lambda, opts, eval_grid);
    curve.entries.push_back(entry_from_result(lambda, result));
    if (lambda == lambdas.back()) curve.final_set = result.set;
  }
  return curve;
}

WeakTypeCurve weaktype_curve(const ScalarField& field, const RadialProfile& profile,
                             const std::vector<double>& lambdas, const LevelSetOptions& options) {
  check_schedule(lambdas);
  WeakTypeCurve curve;
  curve.input_descriptor = field.descriptor;
  curve.profile_descriptor = profile.describe();
  curve.mass = field_mass(field);

  FieldAccumulator acc(field);
  MaximalField grid_field;
  LevelSetOptions opts = options;
  for (double lambda : lambdas) {
    if (opts.precomputed_grid_field == nullptr) {
      const Point center = opts.center.value_or(acc.centroid());
      const double r_est = inverse_ball_capacity(profile, curve.mass / lambda);
      const bool needs_cells = opts.mode == LevelSetOptions::Mode::cells ||
                               (opts.mode == LevelSetOptions::Mode::automatic &&
                                r_est <= opts.cells_fraction * acc.grid().inradius_from(center));
      if (needs_cells) {
        grid_field = maximal_field_grid(acc, profile, opts.field_policy, opts.threads);
        opts.precomputed_grid_field = &grid_field;
      }
    }
    const LevelSetResult result = level_set_bounds(acc, profile, lambda, opts);
    curve.entries.push_back(entry_from_result(lambda, result));
    if (lambda == lambdas.back()) curve.final_set = result.set;
  }
  return curve;
}

LimitEstimate limit_estimate(const WeakTypeCurve& curve) {
  if (curve.entries.size() < 3)
    throw std::domain_error("limit estimate needs at least 3 curve entries");
  const CurveEntry& last = curve.entries.back();
  LimitEstimate est;
  est.lambda_min = last.lambda;
  est.value = 0.5 * (last.h_lower + last.h_upper);
  est.spread = last.h_upper - last.h_lower;

  // Drift over the last decade: compare against the entry closest (in log)
  // to 10 * lambda_min.
  const double target = 10.0 * last.lambda;
  double best_gap = std::numeric_limits<double>::infinity();
  double ref = est.value;
  for (const CurveEntry& e : curve.entries) {
    const double gap = std::abs(std::log(e.lambda / target));
    if (gap < best_gap) {
      best_gap = gap;
      ref = 0.5 * (e.h_lower + e.h_upper);
    }
  }
  est.trend = std::abs(est.value - ref);
  return est;
}

TauBracketReport tau_bracket_check(const WeakTypeCurve& curve, const ScalingEnvelope& envelope) {
  if (curve.entries.empty()) throw std::invalid_argument("tau-bracket check needs a nonempty curve");
  if (!(curve.mass > 0.0)) throw std::invalid_argument("tau-bracket check needs a positive mass");
  const LimitEstimate est = limit_estimate(curve);
  const CurveEntry& last = curve.entries.back();

  TauBracketReport report;
  report.tau = envelope.tau;
  report.h_over_mass_lower = last.h_lower / curve.mass;
  report.h_over_mass_upper = last.h_upper / curve.mass;
  report.slack = (est.spread + est.trend) / curve.mass;
  report.pass = report.h_over_mass_lower >= 1.0 / report.tau - report.slack &&
                report.h_over_mass_upper <= report.tau + report.slack;
  return report;
}

ScaledLimitReport scaled_measure_limit(const AtomicMeasure& nu, const RadialProfile& profile,
                                       double lambda, const std::vector<double>& t_schedule,
                                       const LevelSetOptions& options) {
  if (std::abs(nu.total_mass - 1.0) > 1e-9)
    throw std::invalid_argument("scaled-measure limit needs a unit-mass measure");
  if (!(lambda > 0.0)) throw std::domain_error("threshold must be positive");
  ScaledLimitReport report;
  report.lambda = lambda;
  report.target = 1.0 / lambda;
  double prev_err = std::numeric_limits<double>::infinity();
  for (double t : t_schedule) {
    if (!(t > 0.0)) throw std::domain_error("scale values must be positive");
    const AtomicMeasure nu_t = scale_measure(nu, t);
    const LevelSetResult r = level_set_bounds(nu_t, profile, lambda, options);
    ScaledLimitEntry e;
    e.t = t;
    e.lower = r.bounds.lower;
    e.upper = r.bounds.upper;
    e.rel_err = std::max(std::abs(e.lower - report.target), std::abs(e.upper - report.target)) /
                report.target;
    if (e.rel_err > prev_err * (1.0 + 1e-9)) report.monotone_improvement = false;
    prev_err = e.rel_err;
    report.entries.push_back(e);
  }
  report.final_rel_err = report.entries.empty() ? 0.0 : report.entries.back().rel_err;
  return report;
}

BoundednessReport boundedness_check(const WeakTypeCurve& curve, const ScalingEnvelope& envelope,
                                    double lambda0) {
  BoundednessReport report;
  report.lambda0 = lambda0;
  report.gamma_budget = envelope.psi(3.0) * curve.mass;
  report.a_emp = std::numeric_limits<double>::infinity();
  for (const CurveEntry& e : curve.entries) {
    if (!(e.lambda < lambda0)) continue;
    ++report.tail_entries;
    report.a_emp = std::min(report.a_emp, e.h_lower);
    report.gamma_emp = std::max(report.gamma_emp, e.h_upper);
  }
  if (report.tail_entries < 2) {
    report.insufficient_data = true;
    report.a_emp = 0.0;
    report.pass = false;
    return report;
  }
  report.pass = report.a_emp > 0.0 && report.gamma_emp <= report.gamma_budget * (1.0 + 1e-12);
  return report;
}

}  // namespace capmax
