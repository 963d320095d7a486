// Configuration-driven batch runs: one JSON document describes the profile,
// the input, the grids and schedules; the four commands (maximal, curve,
// verify, covering) consume it and emit CSV/JSON artifacts.
//
// Exit-code discipline: 0 = success / all checks pass, 1 = a verification
// check failed, 2 = configuration error.  Identical config + seed produces
// byte-identical output files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "capmax/capacity.hpp"
#include "capmax/maximal.hpp"
#include "capmax/sampling.hpp"
#include "capmax/setcap.hpp"

namespace capmax {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitConfigError = 2;

struct CoveringSpec {
  std::vector<Ball> balls;  // explicit family; empty -> seeded random family
  std::size_t count = 100;
  int dim = 2;
  double box_half_width = 10.0;
  double r_min = 0.1;
  double r_max = 2.0;
  double dilation = 3.0;
  std::size_t probes = 10000;
};

struct RunConfig {
  RadialProfile profile = RadialProfile::lebesgue(1);
  bool has_profile = false;

  enum class InputKind { none, delta, atoms, preset, field_csv } input_kind = InputKind::none;
  AtomicMeasure atoms;
  PresetSpec preset;
  std::filesystem::path field_csv_path;

  std::optional<Grid> grid;
  std::vector<double> lambdas;
  std::vector<double> t_schedule = {1.0, 0.5, 0.1, 0.01};
  double lambda0 = 0.1;

  LevelSetOptions::Mode set_mode = LevelSetOptions::Mode::automatic;
  MaximalMode operator_mode = MaximalMode::centered;
  int directions = 64;
  RayTraceOptions ray;
  RadiusPolicy field_policy;

  enum class EvalPoints { grid, list } eval_points = EvalPoints::grid;
  std::vector<Point> eval_list;

  std::vector<RadialProfile> verify_profiles;  // empty -> built-in battery

  CoveringSpec covering;

  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;
};

// Parses the versioned JSON document ("schema": 1).  Unknown keys are
// rejected; malformed values throw ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::filesystem::path& path);

// Command drivers; each writes its artifacts under config.out_dir and
// returns an exit code.  Error text lands on `err`.
int run_maximal(const RunConfig& config, std::string& err);
int run_curve(const RunConfig& config, std::string& err);
int run_verify(const RunConfig& config, std::string& err);
int run_covering(const RunConfig& config, std::string& err);

}  // namespace capmax
