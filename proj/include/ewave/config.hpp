#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ewave/duhamel.hpp"
#include "ewave/symbols.hpp"

namespace ewave {

// One initial-data generator.
//   zero       f = 0
//   gaussian   eps * amplitude * mask * exp(-|x - center|^2 / (2 width^2))
//   mode       eps * amplitude * polarization * cos(xi_k . x)
//   broadband  eps * amplitude * seeded random modes with max_a |k_a| <= kmax
//   file       field from a snapshot, times amplitude
struct DataSpec {
  std::string kind = "zero";
  double width = 2.0;
  double amplitude = 1.0;
  std::array<double, 3> mask{1.0, 1.0, 1.0};
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<int, 3> k{1, 0, 0};
  std::array<double, 3> polarization{1.0, 0.0, 0.0};
  int kmax = 4;
  std::string path;
};

struct ClaimRequest {
  std::string id;
  double p = 2.0;
  double alpha = 0.0;
  int ell = 0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  MaterialParams material;
  int n = 64;
  double box_length = 128.0;
  double epsilon = 1e-3;
  DataSpec f0;
  DataSpec f1;
  std::string nonlinearity = "grad_grad2";
  std::string terms;  // for nonlinearity = custom
  Band band = Band::all;  // linear runs may be band-restricted
  // Output times: explicit list, or generated from end/samples/spacing.
  std::vector<double> schedule;
  bool explicit_schedule = false;
  double time_end = 10.0;
  int time_samples = 11;
  std::string time_spacing = "linear";  // linear: 0..end; log: 0 then start..end geometric
  double time_start = 1.0;
  double step = 0.0;  // 0 selects default_step
  double blowup_factor = 1e6;
  bool allow_wrap = false;
  std::vector<ClaimRequest> claims;
  double tolerance = 0.15;
  double t_min = 5.0;
  double t_lo = std::numeric_limits<double>::quiet_NaN();
  double t_hi = std::numeric_limits<double>::quiet_NaN();
  std::string output_dir = "out";
  std::string snapshots = "final";  // all | final | none
  std::uint64_t seed = 1;
  int sweep_parallel = 1;
  // key -> values, expanded as a cartesian product in key order.
  std::map<std::string, std::vector<std::string>> sweep;
  // Every key = value pair as read, in file order (echoed into the manifest).
  std::vector<std::pair<std::string, std::string>> entries;
  std::filesystem::path source;  // file the config came from, if any

  NonlinearityForm form() const;
  // Diameter of the region carrying the data (whole box diagonal for periodic data).
  double support() const;
  // (box_length - support) / (2 sqrt(lambda + 2 mu)), floored at 0.
  double no_wrap_horizon() const;
  double end_time() const { return schedule.empty() ? 0.0 : schedule.back(); }
};

// Parses "key = value" lines; '#' starts a comment and "[section]" prefixes
// following keys with "section.". Throws ConfigError with the line number.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& source = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies one key = value to a config; the shared path used by files and sweeps.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value, int line = 0);

// Builds the schedule from the time.* keys unless it was given explicitly.
void finalize_config(ExperimentConfig& cfg);

// Throws ConfigError naming the violated constraint.
void validate_config(const ExperimentConfig& cfg);

// Expands the sweep lists into independent validated configs (one when no sweep).
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& cfg);

// Canonical "key = value" text of the effective settings.
std::string config_echo(const ExperimentConfig& cfg);

}  // namespace ewave
