// Experiment driver: runs a configured experiment over its seed list and
// writes per-seed traces, the seed-averaged trace, a convergence plot and
// run metadata; or re-validates a previously written trace file.
//
// Exit codes: 0 success, 1 bound violation, 2 config error, 3 I/O error.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "phirm/experiment.h"

namespace {

int verify_main(const std::string& path) {
  const phirm::VerifyReport report = phirm::verify_trace(path);
  if (!report.schema_ok) {
    std::cerr << "schema: FAIL (" << report.schema_error << ")\n";
    // Distinguish unreadable files from malformed ones.
    const bool unreadable =
        report.schema_error.find("cannot open") != std::string::npos;
    return unreadable ? 3 : 2;
  }
  std::cout << "schema: ok\n";
  bool any_fail = false;
  for (const phirm::VerifyCheck& check : report.checks) {
    if (check.ok) {
      std::cout << check.name << ": ok\n";
    } else {
      any_fail = true;
      std::cout << check.name << ": FAIL at row " << check.row << " ("
                << check.detail << ")\n";
    }
  }
  return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "phirm: transformation-family regret matching experiments"};
  std::string config_path, out_dir, verify_path;
  int jobs = 0;
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--jobs", jobs, "seed-level parallelism (overrides config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--verify", verify_path,
                 "re-validate a written trace CSV instead of running");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!verify_path.empty()) {
      if (!config_path.empty()) {
        std::cerr << "error: --verify does not take --config\n";
        return 2;
      }
      return verify_main(verify_path);
    }
    if (config_path.empty()) {
      std::cerr << "error: one of --config or --verify is required\n";
      return 2;
    }
    phirm::ExperimentConfig config =
        phirm::ExperimentConfig::parse_file(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (jobs > 0) config.jobs = jobs;
    const phirm::RunOutcome outcome = phirm::run_experiment(config);
    if (outcome.exit_code == 0) {
      std::cout << outcome.message << "\n";
      std::cout << "wrote " << outcome.files.size() << " files to "
                << config.out_dir << "\n";
    } else {
      std::cerr << "error: " << outcome.message << "\n";
    }
    return outcome.exit_code;
  } catch (const phirm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
