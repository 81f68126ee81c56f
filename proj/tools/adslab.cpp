// adslab: run presets or config files, sweep grids, aggregate run directories.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "adslab/experiment.hpp"
#include "adslab/output.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kTrialFailure = 1;
constexpr int kConfigError = 2;

struct RunArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::size_t> seeds;
  std::size_t workers = 1;
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--config", args.config, "JSON experiment config");
  cmd->add_option("--preset", args.preset, "named preset (see `adslab presets`)");
  cmd->add_option("--out", args.out, "output directory (default $ADSLAB_OUT/<name>)");
  cmd->add_option("--seeds", args.seeds, "number of seeds, overrides the config")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", args.workers, "parallel trials")->check(CLI::PositiveNumber);
}

fs::path default_out(const std::string& name) {
  const char* root = std::getenv("ADSLAB_OUT");
  return fs::path(root && *root ? root : "runs") / name;
}

int run_command(const RunArgs& args, bool sweep) {
  adslab::ExperimentConfig cfg;
  std::string name;
  try {
    if (args.config.empty() == args.preset.empty()) {
      throw adslab::ConfigError(
          "give exactly one of --config or --preset (a config file may name a preset)");
    }
    if (!args.preset.empty()) {
      cfg = adslab::preset(args.preset);
      name = args.preset;
    } else {
      cfg = adslab::load_config(args.config);
      name = fs::path(args.config).stem().string();
    }
    if (args.seeds) cfg.n_seeds = *args.seeds;
    if (sweep && cfg.sweep.empty()) {
      throw adslab::ConfigError("sweep: the config declares no sweep axes");
    }
    cfg.validate();
  } catch (const adslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  const fs::path out = args.out.empty() ? default_out(name) : fs::path(args.out);
  try {
    adslab::RunOptions options;
    options.out_dir = out;
    options.workers = args.workers;
    const auto outcome = adslab::run_experiment(cfg, options);
    std::cout << outcome.trials << " trial(s) -> " << out.string() << " (config "
              << outcome.config_hash << ")\n";
    if (outcome.failed > 0) {
      std::cerr << outcome.failed << " trial(s) failed; see manifest.json\n";
      return kTrialFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTrialFailure;
  }
  return kOk;
}

int report_command(const std::string& dir, const std::string& out) {
  try {
    const auto r = adslab::write_reports(dir, out.empty() ? fs::path(dir) : fs::path(out));
    if (!r.missing.empty()) {
      std::cerr << "missing in " << dir << ":\n";
      for (const auto& f : r.missing) std::cerr << "  " << f << "\n";
      return kTrialFailure;
    }
    for (const auto& f : r.written) std::cout << "wrote " << f << "\n";
    for (const auto& n : r.notes) std::cout << n << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTrialFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population training and distributional-shift simulations"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run every trial of a preset or config");
  add_run_options(run, run_args);

  RunArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "run a config's sweep grid and tabulate failure rates");
  add_run_options(sweep, sweep_args);

  std::string report_dir;
  std::string report_out;
  auto* report = app.add_subcommand("report", "aggregate a finished run directory");
  report->add_option("dir", report_dir, "run directory")->required();
  report->add_option("--out", report_out, "where to write report tables (default: dir)");

  auto* presets = app.add_subcommand("presets", "list preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*run) return run_command(run_args, false);
  if (*sweep) return run_command(sweep_args, true);
  if (*report) return report_command(report_dir, report_out);
  if (*presets) {
    for (const auto& n : adslab::preset_names()) std::cout << n << "\n";
  }
  return kOk;
}
