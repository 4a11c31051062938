// comic-lab: command-line runner for the particle-number fitness experiments.
//
//   comic-lab run <config.json> [--jobs N] [--out DIR] [--seed S]
//   comic-lab verify <record.json>
//   comic-lab list-experiments [--show ID]
//
// Exit codes: 0 success, 1 runtime failure or failed verification,
// 2 invalid configuration or command line.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "comiclab/harness.hpp"

namespace {

using namespace comiclab::harness;

int run_command(const std::string& config_path, std::optional<unsigned> jobs, const std::string& out,
                const std::string& seed_text) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    std::optional<std::uint64_t> flag_seed;
    if (!seed_text.empty()) {
      try {
        flag_seed = parse_seed(seed_text);
      } catch (const std::exception& e) {
        throw ConfigError({std::string("--seed: ") + e.what()});
      }
    }
    apply_seed_override(cfg, flag_seed);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  RunOptions options;
  options.jobs = jobs;
  if (!out.empty())
    options.out_dir = out;
  else if (cfg.output)
    options.out_dir = *cfg.output;
  else
    options.out_dir = "comic-lab-out/" + cfg.experiment + "-" + config_hash(cfg).substr(0, 8);

  try {
    const auto outcome = run_experiment(cfg, options);
    std::cout << "record: " << outcome.record_path.string() << "\n";
    std::cout << "status: " << (outcome.complete ? "complete" : "partial") << "\n";
    for (const auto& f : outcome.failures) std::cerr << "failed point: " << f << "\n";
    return outcome.complete ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
}

int verify_command(const std::string& record_path) {
  const auto report = verify_record(record_path);
  for (const auto& m : report.messages) std::cout << m << "\n";
  std::cout << (report.passed ? "PASS" : "FAIL") << ": " << record_path << " (" << report.rerun_points
            << " points re-run)\n";
  return report.passed ? 0 : 1;
}

int list_command(const std::string& show) {
  if (!show.empty()) {
    try {
      auto doc = preset(show);
      nlohmann::json config = {{"schema", kConfigSchema}, {"experiment", show}, {"seed", 0}};
      config["defaults"] = doc["defaults"];
      config["series"] = doc["series"];
      std::cout << config.dump(2) << "\n";
      return 0;
    } catch (const std::out_of_range& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
  }
  for (const auto& e : list_experiments()) std::cout << e.id << "  " << e.title << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"comic-lab: particle-number fitness experiments for advection-diffusion particle tracking"};
  app.set_version_flag("--version", std::string(COMICLAB_VERSION));
  app.require_subcommand(1);

  std::string config_path, out, seed_text;
  std::optional<unsigned> jobs;
  auto* run = app.add_subcommand("run", "run an experiment config and write CSVs, summary.txt and record.json");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--jobs,-j", jobs, "concurrent sweep jobs")->check(CLI::Range(1u, 1024u));
  run->add_option("--out,-o", out, "output directory (default: config 'output' or comic-lab-out/<id>-<hash>)");
  run->add_option("--seed", seed_text, "master seed; overrides COMIC_LAB_SEED and the config");

  std::string record_path;
  auto* verify = app.add_subcommand("verify", "check a run record and re-run a 10% stratified subsample");
  verify->add_option("record", record_path, "record.json written by 'run'")->required();

  std::string show;
  auto* list = app.add_subcommand("list-experiments", "list the built-in experiments E1..E6");
  list->add_option("--show", show, "print the preset of one experiment as a runnable config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) return run_command(config_path, jobs, out, seed_text);
  if (*verify) return verify_command(record_path);
  if (*list) return list_command(show);
  return 2;
}
