#include "capmax/runconfig.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "capmax/io.hpp"
#include "capmax/parallel.hpp"
#include "capmax/weaktype.hpp"

namespace capmax {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& item : j.items())
    if (!allowed.contains(item.key()))
      throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
}

RadialProfile parse_profile(const json& j) {
  require_keys(j, "profile", {"kind", "n", "kappa", "d", "epsilon"});
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "lebesgue") return RadialProfile::lebesgue(j.at("n").get<int>());
    if (kind == "power_law")
      return RadialProfile::power_law(j.at("kappa").get<double>(), j.at("d").get<double>());
    if (kind == "wobble")
      return RadialProfile::wobble(j.at("kappa").get<double>(), j.at("d").get<double>(),
                                   j.at("epsilon").get<double>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad profile parameters: ") + e.what());
  }
  throw ConfigError("unknown profile kind \"" + kind + "\"");
}

Grid parse_grid(const json& j) {
  require_keys(j, "grid", {"dim", "half_width", "h", "origin", "extents", "cell_budget"});
  const int dim = j.at("dim").get<int>();
  const double h = j.at("h").get<double>();
  const std::int64_t budget =
      j.contains("cell_budget") ? j.at("cell_budget").get<std::int64_t>() : (std::int64_t{1} << 24);
  try {
    if (j.contains("half_width")) return Grid::centered(dim, j.at("half_width").get<double>(), h, budget);
    Point origin;
    origin.dim = dim;
    const auto& o = j.at("origin");
    for (int a = 0; a < dim; ++a) origin[a] = o.at(static_cast<std::size_t>(a)).get<double>();
    std::array<std::int64_t, kMaxDim> extents{1, 1};
    const auto& e = j.at("extents");
    for (int a = 0; a < dim; ++a) extents[static_cast<std::size_t>(a)] = e.at(static_cast<std::size_t>(a)).get<std::int64_t>();
    return Grid::make(dim, origin, h, extents, budget);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad grid: ") + e.what());
  }
}

void parse_input(const json& j, RunConfig& cfg) {
  require_keys(j, "input",
               {"type", "dim", "positions", "weights", "preset", "radius", "sigma", "separation",
                "path", "normalize"});
  const std::string type = j.at("type").get<std::string>();
  if (type == "delta") {
    cfg.input_kind = RunConfig::InputKind::delta;
    cfg.atoms = delta_measure(j.contains("dim") ? j.at("dim").get<int>() : 1);
    return;
  }
  if (type == "atoms") {
    const int dim = j.contains("dim") ? j.at("dim").get<int>() : 1;
    AtomicMeasure nu;
    nu.dim = dim;
    const auto& pos = j.at("positions");
    const auto& w = j.at("weights");
    if (pos.size() != w.size()) throw ConfigError("positions/weights size mismatch");
    if (pos.empty()) throw ConfigError("empty input measure");
    for (std::size_t i = 0; i < pos.size(); ++i) {
      Point p;
      p.dim = dim;
      for (int a = 0; a < dim; ++a) p[a] = pos.at(i).at(static_cast<std::size_t>(a)).get<double>();
      const double weight = w.at(i).get<double>();
      if (weight < 0.0) throw ConfigError("atom weights must be nonnegative");
      nu.add_atom(p, weight);
    }
    if (!(nu.total_mass > 0.0)) throw ConfigError("empty input measure");
    nu.descriptor = "atoms";
    if (j.contains("normalize") && j.at("normalize").get<bool>()) nu = normalize_measure(nu);
    cfg.input_kind = RunConfig::InputKind::atoms;
    cfg.atoms = nu;
    return;
  }
  if (type == "preset") {
    const std::string preset = j.at("preset").get<std::string>();
    cfg.input_kind = RunConfig::InputKind::preset;
    if (preset == "indicator_ball") {
      cfg.preset.preset = FieldPreset::indicator_ball;
      cfg.preset.radius = j.at("radius").get<double>();
    } else if (preset == "gaussian") {
      cfg.preset.preset = FieldPreset::gaussian;
      cfg.preset.sigma = j.at("sigma").get<double>();
    } else if (preset == "two_bumps") {
      cfg.preset.preset = FieldPreset::two_bumps;
      cfg.preset.radius = j.at("radius").get<double>();
      cfg.preset.separation = j.at("separation").get<double>();
    } else {
      throw ConfigError("unknown preset \"" + preset + "\"");
    }
    return;
  }
  if (type == "field_csv") {
    cfg.input_kind = RunConfig::InputKind::field_csv;
    cfg.field_csv_path = j.at("path").get<std::string>();
    return;
  }
  throw ConfigError("unknown input type \"" + type + "\"");
}

std::vector<double> parse_lambdas(const json& j) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(v.get<double>());
    if (out.empty()) throw ConfigError("empty lambda schedule");
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!(out[i] > 0.0)) throw ConfigError("lambda values must be positive");
      if (i > 0 && !(out[i] < out[i - 1]))
        throw ConfigError("lambda schedule must be strictly decreasing");
    }
    return out;
  }
  require_keys(j, "lambdas", {"from", "to", "per_decade"});
  try {
    return lambda_schedule(j.at("from").get<double>(), j.at("to").get<double>(),
                           j.at("per_decade").get<int>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad lambda schedule: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    require_keys(j, "config",
                 {"schema", "profile", "input", "grid", "lambdas", "t_schedule", "lambda0", "mode",
                  "rays", "field_eval", "eval_points", "verify_profiles", "covering", "out", "seed",
                  "threads"});
    if (!j.contains("schema") || j.at("schema").get<int>() != 1)
      throw ConfigError("config requires \"schema\": 1");

    RunConfig cfg;
    if (j.contains("profile")) {
      cfg.profile = parse_profile(j.at("profile"));
      cfg.has_profile = true;
    }
    if (j.contains("input")) parse_input(j.at("input"), cfg);
    if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
    if (j.contains("lambdas")) cfg.lambdas = parse_lambdas(j.at("lambdas"));
    if (j.contains("t_schedule")) {
      cfg.t_schedule.clear();
      for (const auto& v : j.at("t_schedule")) {
        const double t = v.get<double>();
        if (!(t > 0.0)) throw ConfigError("t schedule values must be positive");
        cfg.t_schedule.push_back(t);
      }
      if (cfg.t_schedule.empty()) throw ConfigError("empty t schedule");
    }
    if (j.contains("lambda0")) cfg.lambda0 = j.at("lambda0").get<double>();
    if (j.contains("mode")) {
      const auto& m = j.at("mode");
      require_keys(m, "mode", {"operator", "set"});
      if (m.contains("operator")) {
        const std::string op = m.at("operator").get<std::string>();
        if (op == "centered")
          cfg.operator_mode = MaximalMode::centered;
        else if (op == "uncentered")
          cfg.operator_mode = MaximalMode::uncentered_approx;
        else
          throw ConfigError("unknown operator mode \"" + op + "\"");
      }
      if (m.contains("set")) {
        const std::string s = m.at("set").get<std::string>();
        if (s == "auto")
          cfg.set_mode = LevelSetOptions::Mode::automatic;
        else if (s == "cells")
          cfg.set_mode = LevelSetOptions::Mode::cells;
        else if (s == "rays")
          cfg.set_mode = LevelSetOptions::Mode::rays;
        else
          throw ConfigError("unknown set mode \"" + s + "\"");
      }
    }
    if (j.contains("rays")) {
      const auto& r = j.at("rays");
      require_keys(r, "rays", {"directions", "rel_tol", "outer_cap"});
      if (r.contains("directions")) cfg.directions = r.at("directions").get<int>();
      if (r.contains("rel_tol")) cfg.ray.rel_tol = r.at("rel_tol").get<double>();
      if (r.contains("outer_cap")) cfg.ray.outer_cap = r.at("outer_cap").get<double>();
      if (cfg.directions < 1 || !(cfg.ray.rel_tol > 0.0) || !(cfg.ray.outer_cap > 0.0))
        throw ConfigError("bad ray options");
    }
    if (j.contains("field_eval")) {
      const auto& f = j.at("field_eval");
      require_keys(f, "field_eval", {"radii", "refine_rounds", "r_min", "r_max"});
      if (f.contains("radii")) cfg.field_policy.count = f.at("radii").get<int>();
      if (f.contains("refine_rounds")) cfg.field_policy.refine_rounds = f.at("refine_rounds").get<int>();
      if (f.contains("r_min")) cfg.field_policy.r_min = f.at("r_min").get<double>();
      if (f.contains("r_max")) cfg.field_policy.r_max = f.at("r_max").get<double>();
      if (cfg.field_policy.count < 2) throw ConfigError("field_eval.radii must be at least 2");
    }
    if (j.contains("eval_points")) {
      const auto& e = j.at("eval_points");
      require_keys(e, "eval_points", {"type", "points", "dim"});
      const std::string type = e.at("type").get<std::string>();
      if (type == "grid") {
        cfg.eval_points = RunConfig::EvalPoints::grid;
      } else if (type == "list") {
        cfg.eval_points = RunConfig::EvalPoints::list;
        const int dim = e.contains("dim") ? e.at("dim").get<int>() : 1;
        for (const auto& row : e.at("points")) {
          Point p;
          p.dim = dim;
          for (int a = 0; a < dim; ++a) p[a] = row.at(static_cast<std::size_t>(a)).get<double>();
          cfg.eval_list.push_back(p);
        }
        if (cfg.eval_list.empty()) throw ConfigError("empty eval point list");
      } else {
        throw ConfigError("unknown eval_points type \"" + type + "\"");
      }
    }
    if (j.contains("verify_profiles"))
      for (const auto& p : j.at("verify_profiles")) cfg.verify_profiles.push_back(parse_profile(p));
    if (j.contains("covering")) {
      const auto& c = j.at("covering");
      require_keys(c, "covering",
                   {"balls", "count", "dim", "box_half_width", "r_min", "r_max", "dilation", "probes"});
      if (c.contains("balls")) {
        for (const auto& row : c.at("balls")) {
          if (row.size() < 2) throw ConfigError("covering ball rows need center coordinates and radius");
          Ball b;
          b.center.dim = static_cast<int>(row.size()) - 1;
          if (b.center.dim > kMaxDim) throw ConfigError("covering balls support dimension <= 2");
          for (int a = 0; a < b.center.dim; ++a) b.center[a] = row.at(static_cast<std::size_t>(a)).get<double>();
          b.radius = row.at(row.size() - 1).get<double>();
          if (!(b.radius > 0.0)) throw ConfigError("covering ball radii must be positive");
          cfg.covering.balls.push_back(b);
        }
      }
      if (c.contains("count")) cfg.covering.count = c.at("count").get<std::size_t>();
      if (c.contains("dim")) cfg.covering.dim = c.at("dim").get<int>();
      if (c.contains("box_half_width")) cfg.covering.box_half_width = c.at("box_half_width").get<double>();
      if (c.contains("r_min")) cfg.covering.r_min = c.at("r_min").get<double>();
      if (c.contains("r_max")) cfg.covering.r_max = c.at("r_max").get<double>();
      if (c.contains("dilation")) cfg.covering.dilation = c.at("dilation").get<double>();
      if (c.contains("probes")) cfg.covering.probes = c.at("probes").get<std::size_t>();
    }
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  }
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

// --- shared command plumbing -------------------------------------------------

namespace {

struct ResolvedInput {
  bool is_field = false;
  AtomicMeasure nu;
  ScalarField field;

  double mass() const { return is_field ? field_mass(field) : nu.total_mass; }
  std::string descriptor() const { return is_field ? field.descriptor : nu.descriptor; }
};

ResolvedInput resolve_input(const RunConfig& cfg) {
  ResolvedInput in;
  switch (cfg.input_kind) {
    case RunConfig::InputKind::none:
      throw ConfigError("this command needs an \"input\" entry");
    case RunConfig::InputKind::delta:
    case RunConfig::InputKind::atoms:
      in.nu = cfg.atoms;
      if (!(in.nu.total_mass > 0.0)) throw ConfigError("empty input measure");
      return in;
    case RunConfig::InputKind::preset:
      if (!cfg.grid.has_value()) throw ConfigError("preset inputs need a \"grid\" entry");
      try {
        in.field = make_field(cfg.preset, *cfg.grid);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad preset: ") + e.what());
      }
      in.is_field = true;
      return in;
    case RunConfig::InputKind::field_csv:
      if (!cfg.grid.has_value()) throw ConfigError("field_csv inputs need a \"grid\" entry");
      try {
        in.field = read_field_csv(cfg.field_csv_path, *cfg.grid);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("cannot load field CSV: ") + e.what());
      }
      in.is_field = true;
      return in;
  }
  throw ConfigError("unresolved input");
}

LevelSetOptions level_set_options(const RunConfig& cfg) {
  LevelSetOptions opts;
  opts.mode = cfg.set_mode;
  opts.directions = cfg.directions;
  opts.ray = cfg.ray;
  opts.field_policy = cfg.field_policy;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  return opts;
}

int config_failure(std::string& err, const std::string& message) {
  err = message;
  return kExitConfigError;
}

}  // namespace

int run_maximal(const RunConfig& config, std::string& err) {
  try {
    const ResolvedInput input = resolve_input(config);
    std::vector<Point> points;
    std::optional<Grid> points_grid;
    if (config.eval_points == RunConfig::EvalPoints::list) {
      points = config.eval_list;
    } else {
      if (!config.grid.has_value())
        throw ConfigError("eval_points \"grid\" needs a \"grid\" entry");
      points_grid = *config.grid;
      points.resize(static_cast<std::size_t>(config.grid->cell_count()));
      for (std::size_t i = 0; i < points.size(); ++i)
        points[i] = config.grid->cell_center(static_cast<std::int64_t>(i));
    }

    MaximalField mfield;
    if (config.operator_mode == MaximalMode::centered) {
      if (input.is_field) {
        FieldAccumulator acc(input.field);
        mfield.points = points;
        mfield.values.resize(points.size());
        parallel_for(points.size(), config.threads, [&](std::size_t i) {
          mfield.values[i] = maximal_at_point_field(acc, config.profile, points[i], config.field_policy);
        });
      } else {
        mfield = maximal_field_measure(input.nu, config.profile, points, config.threads);
      }
    } else {
      mfield.mode = MaximalMode::uncentered_approx;
      mfield.points = points;
      mfield.values.resize(points.size());
      if (input.is_field) {
        FieldAccumulator acc(input.field);
        parallel_for(points.size(), config.threads, [&](std::size_t i) {
          mfield.values[i] = uncentered_maximal_at_point(acc, config.profile, points[i]);
        });
      } else {
        parallel_for(points.size(), config.threads, [&](std::size_t i) {
          mfield.values[i] = uncentered_maximal_at_point(input.nu, config.profile, points[i]);
        });
      }
    }
    mfield.grid = points_grid;
    write_file_atomic(config.out_dir / "maximal.csv", maximal_field_csv(mfield));
    if (input.is_field) write_file_atomic(config.out_dir / "field.csv", field_csv(input.field));
    return kExitSuccess;
  } catch (const ConfigError& e) {
    return config_failure(err, e.what());
  } catch (const std::exception& e) {
    return config_failure(err, std::string("run failed: ") + e.what());
  }
}

namespace {

// Default schedule: geometric from 1e-1, 10 points per decade, down to the
// smallest lambda whose certified ray cap (support radius + c^{-1}(mass /
// lambda)) still fits under the configured outer radius cap.
std::vector<double> default_lambda_schedule(const ResolvedInput& input, const RunConfig& config) {
  double support_radius = 0.0;
  double mass = 0.0;
  if (input.is_field) {
    const FieldAccumulator acc(input.field);
    support_radius = distance(acc.support_ball_center(), acc.centroid()) + acc.support_ball_radius();
    mass = acc.total_mass();
  } else {
    const Point c = input.nu.centroid();
    support_radius = input.nu.support_radius(c);
    mass = input.nu.total_mass;
  }
  // The ray tracer inflates its certified cap by 1e-9; stay on the feasible
  // side of that margin.
  const double reach = config.ray.outer_cap / (1.0 + 2e-9) - support_radius;
  if (!(reach > 0.0) || !(mass > 0.0))
    throw ConfigError("outer radius cap is too small for this input");
  const double lambda_cap = mass / ball_capacity(config.profile, reach);
  if (!(lambda_cap < 1e-1 / std::pow(10.0, 0.2)))
    throw ConfigError("outer radius cap admits fewer than 3 lambda entries");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double lam = 1e-1 * std::pow(10.0, -0.1 * k);
    if (lam < lambda_cap) break;
    out.push_back(lam);
  }
  return out;
}

}  // namespace

int run_curve(const RunConfig& config, std::string& err) {
  try {
    const ResolvedInput input = resolve_input(config);
    std::vector<double> lambdas = config.lambdas;
    if (lambdas.empty()) lambdas = default_lambda_schedule(input, config);
    if (lambdas.size() < 3)
      throw ConfigError("curve runs need a lambda schedule with at least 3 entries");
    const LevelSetOptions opts = level_set_options(config);

    WeakTypeCurve curve;
    if (input.is_field) {
      curve = weaktype_curve(input.field, config.profile, lambdas, opts);
    } else {
      curve = weaktype_curve(input.nu, config.profile, lambdas, opts,
                             config.grid.has_value() ? &*config.grid : nullptr);
    }
    const LimitEstimate est = limit_estimate(curve);

    json out;
    out["schema"] = 1;
    out["input"] = curve.input_descriptor;
    out["profile"] = curve.profile_descriptor;
    out["mass"] = curve.mass;
    out["limit"] = {{"value", est.value},
                    {"spread", est.spread},
                    {"trend", est.trend},
                    {"lambda_min", est.lambda_min}};

    auto ball_json = [](const Ball& b) {
      json c = json::array();
      for (int a = 0; a < b.center.dim; ++a) c.push_back(b.center[a]);
      return json{{"center", c}, {"radius", b.radius}};
    };
    json bounds = json::array();
    for (const CurveEntry& e : curve.entries) {
      json cover = json::array();
      for (const Ball& b : e.bounds.witness_cover) cover.push_back(ball_json(b));
      bounds.push_back({{"lambda", e.lambda},
                        {"lower", e.bounds.lower},
                        {"upper", e.bounds.upper},
                        {"witness_lower", ball_json(e.bounds.witness_lower)},
                        {"witness_enclosing", ball_json(e.bounds.witness_enclosing)},
                        {"witness_cover", cover},
                        {"probe", {{"interior_checked", e.probe.interior_checked},
                                   {"interior_failures", e.probe.interior_failures},
                                   {"exterior_checked", e.probe.exterior_checked},
                                   {"exterior_failures", e.probe.exterior_failures}}}});
    }
    write_file_atomic(config.out_dir / "curve.csv", curve_csv(curve));
    write_file_atomic(config.out_dir / "limit.json", out.dump(2) + "\n");
    write_file_atomic(config.out_dir / "bounds.json", bounds.dump(2) + "\n");
    write_file_atomic(config.out_dir / "level_set.csv", level_set_csv(curve.final_set));
    return kExitSuccess;
  } catch (const ConfigError& e) {
    return config_failure(err, e.what());
  } catch (const std::exception& e) {
    return config_failure(err, std::string("run failed: ") + e.what());
  }
}

// --- verify ---------------------------------------------------------------------

namespace {

AtomicMeasure two_atom_measure(int dim) {
  AtomicMeasure nu;
  nu.dim = dim;
  Point a, b;
  a.dim = b.dim = dim;
  a[0] = -1.0;
  b[0] = 1.0;
  nu.add_atom(a, 0.5);
  nu.add_atom(b, 0.5);
  nu.descriptor = "two_atoms";
  return nu;
}

std::vector<RadialProfile> battery_profiles(const RunConfig& cfg) {
  if (!cfg.verify_profiles.empty()) return cfg.verify_profiles;
  return {RadialProfile::lebesgue(1), RadialProfile::lebesgue(2), RadialProfile::power_law(1.0, 1.5),
          RadialProfile::wobble(1.0, 2.0, 0.2)};
}

struct CheckResult {
  std::string name;
  bool pass = true;
  bool informational = false;
  json details = json::object();
};

CheckResult check_profile_validation(const std::vector<RadialProfile>& profiles) {
  CheckResult result{"profile_validation"};
  const std::vector<double> rs = geometric_lattice(1e-4, 1e4, 161);
  const std::vector<double> ts = geometric_lattice(1e-3, 10.0, 41);
  json items = json::array();
  for (const RadialProfile& p : profiles) {
    const ProfileReport rep = validate_profile(p, rs, ts);
    json item;
    item["profile"] = p.describe();
    item["monotone"] = rep.monotone_ok;
    item["zero_at_zero"] = rep.zero_at_zero_ok;
    item["envelope"] = rep.envelope_ok;
    if (!rep.violations.empty()) {
      json vio = json::array();
      for (const auto& v : rep.violations)
        vio.push_back({{"check", v.check}, {"t", v.t}, {"r", v.r}, {"detail", v.detail}});
      item["violations"] = vio;
    }
    items.push_back(item);
    result.pass = result.pass && rep.pass();
  }
  result.details["profiles"] = items;
  return result;
}

CheckResult check_delta_identity(const std::vector<RadialProfile>& profiles,
                                 const LevelSetOptions& opts) {
  CheckResult result{"delta_identity"};
  const std::vector<double> lambdas = {1e-1, 1e-2, 1e-3, 1e-4};
  json items = json::array();
  for (const RadialProfile& p : profiles) {
    const int dim = p.kind == ProfileKind::lebesgue ? p.n : 1;
    const AtomicMeasure delta = delta_measure(dim);
    double worst = 0.0;
    for (double lambda : lambdas) {
      const LevelSetResult r = level_set_bounds(delta, p, lambda, opts);
      worst = std::max({worst, std::abs(lambda * r.bounds.lower - 1.0),
                        std::abs(lambda * r.bounds.upper - 1.0)});
      if (!r.probe.pass()) result.pass = false;
    }
    items.push_back({{"profile", p.describe()}, {"max_abs_error", worst}});
    if (worst > 1e-3) result.pass = false;
  }
  result.details["cases"] = items;
  result.details["tolerance"] = 1e-3;
  return result;
}

CheckResult check_scaled_measure_limit(const RunConfig& cfg, const LevelSetOptions& opts) {
  CheckResult result{"scaled_measure_limit"};
  const AtomicMeasure nu = two_atom_measure(1);
  const RadialProfile profile = RadialProfile::power_law(1.0, 1.0);
  const ScaledLimitReport rep = scaled_measure_limit(nu, profile, 0.1, cfg.t_schedule, opts);
  result.pass = rep.monotone_improvement && rep.final_rel_err <= 0.05;
  result.details["lambda"] = rep.lambda;
  result.details["target"] = rep.target;
  result.details["final_rel_err"] = rep.final_rel_err;
  result.details["monotone_improvement"] = rep.monotone_improvement;
  json entries = json::array();
  for (const auto& e : rep.entries)
    entries.push_back({{"t", e.t}, {"lower", e.lower}, {"upper", e.upper}, {"rel_err", e.rel_err}});
  result.details["entries"] = entries;
  return result;
}

CheckResult check_superlevel_openness(const RunConfig& cfg) {
  CheckResult result{"superlevel_openness"};
  SplitMix64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const RadialProfile profiles[] = {RadialProfile::lebesgue(2), RadialProfile::power_law(1.0, 1.5),
                                    RadialProfile::wobble(1.0, 2.0, 0.2)};
  std::size_t instances = 0, failures = 0;
  for (int rep = 0; rep < 12; ++rep) {
    const int dim = rep % 2 == 0 ? 2 : 1;
    const RadialProfile& profile = profiles[rep % 3];
    AtomicMeasure nu;
    nu.dim = dim;
    const int atoms = 1 + static_cast<int>(rng.next_below(6));
    for (int i = 0; i < atoms; ++i) {
      Point p;
      p.dim = dim;
      for (int a = 0; a < dim; ++a) p[a] = rng.uniform(-2.0, 2.0);
      nu.add_atom(p, rng.uniform(0.05, 1.0));
    }
    Point x;
    x.dim = dim;
    for (int a = 0; a < dim; ++a) x[a] = rng.uniform(-2.0, 2.0);
    const double m = maximal_at_point_measure(nu, profile, x);
    const double lambda = std::isinf(m) ? 1.0 : 0.5 * m;
    const double delta = openness_radius(nu, profile, x, lambda);
    ++instances;
    if (!(delta > 0.0)) {
      ++failures;
      continue;
    }
    for (int probe = 0; probe < 16; ++probe) {
      Point z = x;
      double r = delta * std::pow(rng.next_double(), 1.0 / dim);
      if (dim == 1) {
        z[0] = x[0] + (rng.next_double() < 0.5 ? -r : r);
      } else {
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        z[0] = x[0] + r * std::cos(theta);
        z[1] = x[1] + r * std::sin(theta);
      }
      if (!(maximal_at_point_measure(nu, profile, z) > lambda)) {
        ++failures;
        break;
      }
    }
  }
  result.pass = failures == 0;
  result.details["instances"] = instances;
  result.details["failures"] = failures;
  return result;
}

CheckResult check_weak_bound(const std::vector<RadialProfile>& profiles,
                             const LevelSetOptions& opts) {
  CheckResult result{"weak_bound"};
  const std::vector<double> lambdas = {1e-1, 1e-2, 1e-3};
  json items = json::array();
  auto run_case = [&](const AtomicMeasure& nu, const RadialProfile& p) {
    const WeakBoundReport rep = weak11_bound_check(nu, p, lambdas, opts);
    items.push_back({{"input", nu.descriptor},
                     {"profile", p.describe()},
                     {"gamma", rep.gamma},
                     {"best_constant", rep.best_constant},
                     {"pass", rep.pass()}});
    if (!rep.pass()) result.pass = false;
  };
  for (const RadialProfile& p : profiles) {
    const int dim = p.kind == ProfileKind::lebesgue ? p.n : 1;
    run_case(delta_measure(dim), p);
  }
  run_case(two_atom_measure(1), RadialProfile::power_law(1.0, 1.0));
  run_case(two_atom_measure(2), RadialProfile::wobble(1.0, 2.0, 0.2));
  result.details["cases"] = items;
  return result;
}

CheckResult check_scaling_sandwich(const RunConfig& cfg) {
  CheckResult result{"scaling_sandwich"};
  const RadialProfile profile = RadialProfile::wobble(1.0, 2.0, 0.2);
  const AtomicMeasure nu = two_atom_measure(2);
  SplitMix64 rng(cfg.seed ^ 0xda3e39cb94b95bdbULL);
  std::vector<Point> points;
  points.reserve(1000);
  for (int i = 0; i < 1000; ++i) {
    Point p;
    p.dim = 2;
    p[0] = rng.uniform(-3.0, 3.0);
    p[1] = rng.uniform(-3.0, 3.0);
    points.push_back(p);
  }
  json items = json::array();
  for (double t : {0.5, 0.1, 0.01}) {
    const SandwichReport rep = sandwich_check(nu, profile, t, points);
    items.push_back({{"t", t},
                     {"checked", rep.checked},
                     {"violations", rep.violations},
                     {"max_relative_excess", rep.max_relative_excess}});
    if (!rep.pass()) result.pass = false;
  }
  result.details["cases"] = items;
  result.details["tolerance"] = 1e-10;
  return result;
}

struct CurveCase {
  std::string name;
  WeakTypeCurve curve;
  ScalingEnvelope envelope;
};

std::vector<CurveCase> battery_curves(const LevelSetOptions& opts) {
  std::vector<CurveCase> cases;
  {
    CurveCase c;
    c.name = "delta_power_law";
    const RadialProfile p = RadialProfile::power_law(1.0, 1.5);
    c.curve = weaktype_curve(delta_measure(1), p, lambda_schedule(1e-1, 1e-4, 10), opts);
    c.envelope = scaling_envelope(p);
    cases.push_back(std::move(c));
  }
  {
    CurveCase c;
    c.name = "indicator_ball_1d_lebesgue";
    const RadialProfile p = RadialProfile::lebesgue(1);
    const Grid g = Grid::centered(1, 1.5, 0.01);
    const ScalarField f = make_field({FieldPreset::indicator_ball, 1.0, 1.0, 4.0}, g);
    c.curve = weaktype_curve(f, p, lambda_schedule(1e-1, 1e-4, 10), opts);
    c.envelope = scaling_envelope(p);
    cases.push_back(std::move(c));
  }
  {
    CurveCase c;
    c.name = "gaussian_2d_lebesgue";
    const RadialProfile p = RadialProfile::lebesgue(2);
    const Grid g = Grid::centered(2, 8.0, 0.125);
    PresetSpec spec;
    spec.preset = FieldPreset::gaussian;
    spec.sigma = 1.0;
    const ScalarField f = make_field(spec, g);
    c.curve = weaktype_curve(f, p, lambda_schedule(1e-1, 1e-4, 10), opts);
    c.envelope = scaling_envelope(p);
    cases.push_back(std::move(c));
  }
  {
    CurveCase c;
    c.name = "two_atoms_wobble";
    const RadialProfile p = RadialProfile::wobble(1.0, 2.0, 0.2);
    c.curve = weaktype_curve(two_atom_measure(1), p, lambda_schedule(1e-1, 1e-3, 10), opts);
    c.envelope = scaling_envelope(p);
    cases.push_back(std::move(c));
  }
  return cases;
}

CheckResult check_tau_bracket(const std::vector<CurveCase>& cases) {
  CheckResult result{"tau_bracket"};
  json items = json::array();
  for (const CurveCase& c : cases) {
    const TauBracketReport rep = tau_bracket_check(c.curve, c.envelope);
    std::size_t probe_failures = 0;
    for (const CurveEntry& e : c.curve.entries)
      probe_failures += e.probe.interior_failures + e.probe.exterior_failures;
    items.push_back({{"case", c.name},
                     {"tau", rep.tau},
                     {"h_over_mass_lower", rep.h_over_mass_lower},
                     {"h_over_mass_upper", rep.h_over_mass_upper},
                     {"slack", rep.slack},
                     {"probe_failures", probe_failures},
                     {"pass", rep.pass}});
    if (!rep.pass || probe_failures != 0) result.pass = false;
  }
  result.details["cases"] = items;
  return result;
}

CheckResult check_boundedness(const std::vector<CurveCase>& cases, double lambda0) {
  CheckResult result{"boundedness"};
  json items = json::array();
  for (const CurveCase& c : cases) {
    const BoundednessReport rep = boundedness_check(c.curve, c.envelope, lambda0);
    items.push_back({{"case", c.name},
                     {"a_emp", rep.a_emp},
                     {"gamma_emp", rep.gamma_emp},
                     {"gamma_budget", rep.gamma_budget},
                     {"insufficient_data", rep.insufficient_data},
                     {"pass", rep.pass}});
    if (!rep.pass) result.pass = false;
  }
  result.details["cases"] = items;
  return result;
}

CheckResult check_centered_uncentered_gap() {
  CheckResult result{"centered_uncentered_gap"};
  result.informational = true;
  const RadialProfile p = RadialProfile::lebesgue(2);
  const AtomicMeasure delta = delta_measure(2);
  json items = json::array();
  for (double r : {1.0, 2.0}) {
    const Point x(r, 0.0);
    const double centered = maximal_at_point_measure(delta, p, x);
    const double uncentered = uncentered_maximal_at_point(delta, p, x);
    items.push_back({{"distance", r},
                     {"centered", centered},
                     {"uncentered", uncentered},
                     {"ratio", uncentered / centered}});
  }
  result.details["delta_lebesgue_2d"] = items;
  result.details["note"] =
      "the centered operator matches the exact level-set identities; the uncentered variant "
      "dominates it by the dilation factor visible in the ratio";
  return result;
}

}  // namespace

int run_verify(const RunConfig& config, std::string& err) {
  try {
    const std::vector<RadialProfile> profiles = battery_profiles(config);
    LevelSetOptions opts = level_set_options(config);

    std::vector<CheckResult> checks;
    checks.push_back(check_profile_validation(profiles));

    // A corrupted profile battery stops here: the remaining checks assume
    // validated profiles.
    if (checks.back().pass) {
      checks.push_back(check_delta_identity(profiles, opts));
      checks.push_back(check_scaled_measure_limit(config, opts));
      checks.push_back(check_superlevel_openness(config));
      checks.push_back(check_weak_bound(profiles, opts));
      checks.push_back(check_scaling_sandwich(config));
      const std::vector<CurveCase> curves = battery_curves(opts);
      checks.push_back(check_tau_bracket(curves));
      checks.push_back(check_boundedness(curves, config.lambda0));
      checks.push_back(check_centered_uncentered_gap());

      if (config.input_kind != RunConfig::InputKind::none && config.has_profile) {
        const ResolvedInput input = resolve_input(config);
        CheckResult extra{"config_input_curve"};
        const std::vector<double> lambdas =
            config.lambdas.empty() ? lambda_schedule(1e-1, 1e-3, 10) : config.lambdas;
        WeakTypeCurve curve;
        if (input.is_field)
          curve = weaktype_curve(input.field, config.profile, lambdas, opts);
        else
          curve = weaktype_curve(input.nu, config.profile, lambdas, opts,
                                 config.grid.has_value() ? &*config.grid : nullptr);
        const ScalingEnvelope env = scaling_envelope(config.profile);
        const TauBracketReport tau = tau_bracket_check(curve, env);
        const BoundednessReport bounded = boundedness_check(curve, env, config.lambda0);
        extra.pass = tau.pass && bounded.pass;
        extra.details["tau_bracket_pass"] = tau.pass;
        extra.details["boundedness_pass"] = bounded.pass;
        extra.details["h_over_mass_lower"] = tau.h_over_mass_lower;
        extra.details["h_over_mass_upper"] = tau.h_over_mass_upper;
        checks.push_back(std::move(extra));
      }
    }

    json report;
    report["schema"] = 1;
    json items = json::array();
    bool all_pass = true;
    std::string first_failure;
    for (const CheckResult& c : checks) {
      json item;
      item["name"] = c.name;
      item["pass"] = c.pass;
      if (c.informational) item["informational"] = true;
      item["details"] = c.details;
      items.push_back(item);
      if (!c.pass && first_failure.empty()) first_failure = c.name;
      all_pass = all_pass && c.pass;
    }
    report["checks"] = items;
    report["pass"] = all_pass;
    if (!all_pass) report["first_failure"] = first_failure;
    write_file_atomic(config.out_dir / "verify_report.json", report.dump(2) + "\n");

    if (!all_pass) {
      err = "verification failed: " + first_failure;
      return kExitVerificationFailure;
    }
    return kExitSuccess;
  } catch (const ConfigError& e) {
    return config_failure(err, e.what());
  } catch (const std::exception& e) {
    return config_failure(err, std::string("run failed: ") + e.what());
  }
}

int run_covering(const RunConfig& config, std::string& err) {
  try {
    SplitMix64 rng(config.seed);
    BallFamily family;
    family.dilation = config.covering.dilation;
    if (!config.covering.balls.empty()) {
      family.balls = config.covering.balls;
    } else {
      family = random_ball_family(config.covering.count, config.covering.dim,
                                  config.covering.box_half_width, config.covering.r_min,
                                  config.covering.r_max, rng);
      family.dilation = config.covering.dilation;
    }
    const BallFamily selection = greedy_disjoint_subfamily(family);
    SplitMix64 probe_rng = rng.fork(0xc0ffee);
    const CoverageReport coverage =
        check_dilate_coverage(family, selection, config.covering.probes, probe_rng);

    json report;
    report["schema"] = 1;
    report["input_balls"] = family.balls.size();
    report["selected"] = selection.balls.size();
    report["dilation"] = family.dilation;
    report["probes"] = coverage.probes;
    report["misses"] = coverage.misses;
    report["pass"] = coverage.pass();
    write_file_atomic(config.out_dir / "covering.csv", ball_family_csv(selection));
    write_file_atomic(config.out_dir / "covering_report.json", report.dump(2) + "\n");
    if (!coverage.pass()) {
      err = "verification failed: dilate coverage has misses";
      return kExitVerificationFailure;
    }
    return kExitSuccess;
  } catch (const ConfigError& e) {
    return config_failure(err, e.what());
  } catch (const std::exception& e) {
    return config_failure(err, std::string("run failed: ") + e.what());
  }
}

}  // namespace capmax
