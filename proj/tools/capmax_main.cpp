// capmax command-line front end.
//
//   capmax maximal  --config run.json [--out DIR] [--seed N] [--threads N]
//   capmax curve    --config run.json ...
//   capmax verify  [--config run.json] ...
//   capmax covering [--config run.json] ...
//
// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 configuration error.

#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "capmax/runconfig.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags.config_path, "run configuration JSON");
  if (config_required) opt->required();
  cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", [&flags](const CLI::results_t& res) {
    try {
      flags.seed = std::stoull(res.front());
    } catch (const std::exception&) {
      return false;  // conversion failure -> CLI11 parse error
    }
    return true;
  }, "seed for randomized checks (overrides config)");
  cmd->add_option("--threads", [&flags](const CLI::results_t& res) {
    try {
      flags.threads = std::stoi(res.front());
    } catch (const std::exception&) {
      return false;
    }
    return true;
  }, "worker threads, 0 = hardware (overrides config)");
}

int dispatch(const CommonFlags& flags,
             const std::function<int(const capmax::RunConfig&, std::string&)>& runner) {
  capmax::RunConfig config;
  try {
    if (!flags.config_path.empty()) config = capmax::load_config_file(flags.config_path);
  } catch (const capmax::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return capmax::kExitConfigError;
  }
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.seed.has_value()) config.seed = *flags.seed;
  if (flags.threads.has_value()) config.threads = *flags.threads;

  std::string err;
  const int code = runner(config, err);
  if (code != capmax::kExitSuccess) std::cerr << (code == capmax::kExitConfigError ? "config error: " : "") << err << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacitary maximal function laboratory"};
  app.require_subcommand(1);

  CommonFlags maximal_flags, curve_flags, verify_flags, covering_flags;
  CLI::App* maximal = app.add_subcommand("maximal", "evaluate the maximal function, write CSV");
  add_common(maximal, maximal_flags, true);
  CLI::App* curve = app.add_subcommand("curve", "weak-type curve and limit estimate");
  add_common(curve, curve_flags, true);
  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify, verify_flags, false);
  CLI::App* covering = app.add_subcommand("covering", "greedy disjoint ball selection + coverage");
  add_common(covering, covering_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : capmax::kExitConfigError;
  }

  if (maximal->parsed()) return dispatch(maximal_flags, capmax::run_maximal);
  if (curve->parsed()) return dispatch(curve_flags, capmax::run_curve);
  if (verify->parsed()) return dispatch(verify_flags, capmax::run_verify);
  if (covering->parsed()) return dispatch(covering_flags, capmax::run_covering);
  return capmax::kExitConfigError;
}
