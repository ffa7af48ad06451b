#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ewave/config.hpp"
#include "ewave/metrology.hpp"

namespace ewave {

enum class HarnessMode { simulate, verify };

struct RunOutcome {
  int exit_code = 0;  // 0 all verdicts pass, 1 a verdict failed, 2 runtime error
  std::filesystem::path dir;
  std::vector<DecayReport> reports;
  std::string error;  // set when exit_code == 2
};

// Output directory: EWAVE_OUTPUT_DIR when set, else the configured one.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

// Initial data (f0, f1) of a config, physical.
std::pair<VectorField, VectorField> initial_data(const ExperimentConfig& cfg);

// Runs the config (all sweep points) and writes into the output directory:
//   config.txt, snapshots/*.ewsp, claims/*.csv, summary.csv, report_meta.json, manifest.json.
// simulate skips the claims. Errors are reported through exit_code 2, not thrown.
RunOutcome run_experiment(const ExperimentConfig& cfg, HarnessMode mode);

// Re-fits the per-claim CSVs listed in dir/report_meta.json, rewrites
// dir/summary.csv and prints it. Returns 0 when every verdict passes, else 1.
int render_report(const std::filesystem::path& dir, std::ostream& out);

// Human-readable verdict table.
void print_reports(const std::vector<DecayReport>& reports, std::ostream& out);

}  // namespace ewave
