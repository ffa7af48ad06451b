#include <CLI11.hpp>

#include <iostream>

#include "ewave/config.hpp"
#include "ewave/errors.hpp"
#include "ewave/harness.hpp"
#include "ewave/log.hpp"
#include "ewave/selftest.hpp"

namespace {

int run_config(const std::string& path, ewave::HarnessMode mode) {
  const ewave::ExperimentConfig cfg = ewave::load_config(path);
  const auto outcome = ewave::run_experiment(cfg, mode);
  if (outcome.exit_code == 2) {
    std::cerr << "error: " << outcome.error << "\n";
    return 2;
  }
  if (mode == ewave::HarnessMode::verify) ewave::print_reports(outcome.reports, std::cout);
  std::cout << "artifacts in " << outcome.dir.string() << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver and decay-rate verification for damped elastic waves"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress");

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run a configuration and write snapshots");
  simulate->add_option("config", config_path, "Config file")->required();
  auto* verify = app.add_subcommand("verify", "Run a configuration and check its claims");
  verify->add_option("config", config_path, "Config file")->required();

  auto* kernels = app.add_subcommand("kernels", "Kernel checks");
  kernels->require_subcommand(1);
  ewave::KernelSelftestOptions st;
  auto* selftest = kernels->add_subcommand("selftest", "Compare the kernels with the ODE oracle");
  selftest->add_option("--draws", st.draws, "Number of random draws");
  selftest->add_option("--seed", st.seed, "Random seed");
  selftest->add_option("--tolerance", st.tolerance, "Relative error bound");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Re-render the summary of an output directory");
  report->add_option("dir", report_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (verbose) ewave::set_log_level(ewave::LogLevel::info);

  try {
    if (*simulate) return run_config(config_path, ewave::HarnessMode::simulate);
    if (*verify) return run_config(config_path, ewave::HarnessMode::verify);
    if (*selftest) {
      st.near_double = std::min<std::size_t>(st.near_double, st.draws);
      const auto res = ewave::kernel_selftest(st);
      std::cout << (res.pass ? "PASS " : "FAIL ") << res.summary() << "\n";
      return res.pass ? 0 : 1;
    }
    if (*report) return ewave::render_report(report_dir, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
