#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "phasecover/experiment.hpp"
#include "phasecover/threads.hpp"
#include "phasecover/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"phasecover: phase-space cover experiments on discrete carriers"};
  app.set_version_flag("--version", phasecover::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string baseline_dir;
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "run an experiment config and write its artifacts");
  run->add_option("--config", config_path, "config file or bundled fixture name")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--threads", threads, "worker threads (PHASECOVER_THREADS overrides)");

  CLI::App* verify =
      app.add_subcommand("verify", "recompute a config and diff against a baseline directory");
  verify->add_option("--config", config_path, "config file or bundled fixture name")->required();
  verify->add_option("--baseline", baseline_dir, "baseline output directory")->required();
  verify->add_option("--threads", threads, "worker threads (PHASECOVER_THREADS overrides)");

  CLI::App* list = app.add_subcommand("list-fixtures", "print the bundled fixture names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const std::string& name : phasecover::fixture_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
    phasecover::ExperimentConfig cfg = phasecover::load_config(config_path);
    phasecover::RunOutcome outcome;
    if (run->parsed()) {
      outcome = phasecover::run_experiment(cfg, out_dir, phasecover::resolve_threads(threads));
    } else {
      outcome = phasecover::verify_experiment(cfg, baseline_dir,
                                              phasecover::resolve_threads(threads));
    }
    if (outcome.exit_code == 0) {
      std::printf("%s\n", outcome.message.c_str());
    } else {
      std::fprintf(stderr, "error: %s\n", outcome.message.c_str());
    }
    return outcome.exit_code;
  } catch (const phasecover::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const phasecover::NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
