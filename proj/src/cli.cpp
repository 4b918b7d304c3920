#include "dklms/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dklms/config.hpp"
#include "dklms/harness.hpp"

namespace dklms {
namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string seed, trials, steps, threads, algorithms, out_dir;

  // CLI precedence: generic --set pairs first, dedicated flags last.
  std::vector<std::pair<std::string, std::string>> overrides() const {
    std::vector<std::pair<std::string, std::string>> ov;
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError("config: --set expects key=value, got '" + kv +
                          "'\n");
      }
      ov.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!seed.empty()) ov.emplace_back("run.seed", seed);
    if (!trials.empty()) ov.emplace_back("run.trials", trials);
    if (!steps.empty()) ov.emplace_back("run.steps", steps);
    if (!threads.empty()) ov.emplace_back("run.threads", threads);
    if (!algorithms.empty()) ov.emplace_back("run.algorithms", algorithms);
    if (!out_dir.empty()) ov.emplace_back("run.output_dir", out_dir);
    return ov;
  }
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "experiment config file")
      ->required();
  cmd->add_option("--set", args.sets,
                  "override any config key (key=value, repeatable)");
  cmd->add_option("--seed", args.seed, "override run.seed");
  cmd->add_option("--trials", args.trials, "override run.trials");
  cmd->add_option("--steps", args.steps, "override run.steps");
  cmd->add_option("--threads", args.threads, "override run.threads");
  cmd->add_option("--algorithms", args.algorithms,
                  "override run.algorithms (comma-separated)");
  cmd->add_option("-o,--out", args.out_dir, "override run.output_dir");
}

int do_run(const CommonArgs& args, std::ostream& out) {
  const ExperimentConfig cfg =
      parse_config_file(args.config_path, args.overrides());
  const ExperimentResult result = run_experiment(cfg);
  const auto paths = emit_results(result, cfg.output_dir);

  for (const auto& [alg, trace] : result.traces) {
    out << algorithm_name(alg) << ": steady-state MSE "
        << trace.steady_state_mse;
    if (trace.diverged) {
      out << " (non-finite at step " << trace.first_divergent_step
          << "; trace truncated)";
    }
    out << "\n";
  }
  for (const auto& p : paths) out << "wrote " << p << "\n";
  return result.any_diverged() ? 3 : 0;
}

int do_dump_stream(const CommonArgs& args, std::ostream& out) {
  const ExperimentConfig cfg =
      parse_config_file(args.config_path, args.overrides());
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  const fs::path path = fs::path(cfg.output_dir) / "stream.csv";
  std::ofstream file(path);
  if (!file) {
    throw std::runtime_error("cannot write " + path.string());
  }
  dump_stream_csv(cfg, file);
  out << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"deterministic diffusion kernel LMS simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, dump_args;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "run a Monte-Carlo experiment and write results.csv + manifest");
  add_common_options(run_cmd, run_args);
  CLI::App* dump_cmd = app.add_subcommand(
      "dump-stream", "write every trial's raw observation stream as CSV");
  add_common_options(dump_cmd, dump_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (run_cmd->parsed()) return do_run(run_args, out);
    return do_dump_stream(dump_args, out);
  } catch (const ConfigError& e) {
    err << e.what();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dklms
