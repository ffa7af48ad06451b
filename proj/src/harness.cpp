#include "ewave/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ewave/errors.hpp"
#include "ewave/generators.hpp"
#include "ewave/hashing.hpp"
#include "ewave/log.hpp"
#include "ewave/profiles.hpp"
#include "ewave/propagator.hpp"
#include "ewave/snapshot.hpp"

namespace ewave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_profile(ClaimTarget t) {
  return t == ClaimTarget::profile_G || t == ClaimTarget::profile_H || t == ClaimTarget::profile_Gtilde;
}

std::string claim_file(const ClaimRequest& c) {
  return "claims/" + c.id + "_p" + format_number(c.p) + "_a" + format_number(c.alpha) + "_l" + std::to_string(c.ell) +
         ".csv";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::string snapshot_name(const char* what, std::size_t index) {
  std::ostringstream s;
  s << "snapshots/" << what << '_' << std::setw(4) << std::setfill('0') << index << ".ewsp";
  return s.str();
}

json report_json(const DecayReport& r, const std::string& csv) {
  return json{{"claim", r.claim_id},
              {"label", r.label},
              {"p", format_number(r.p)},
              {"alpha", r.alpha},
              {"ell", r.ell},
              {"comparison", to_string(r.comparison)},
              {"theoretical", r.theoretical_slope},
              {"fitted", format_number(r.fitted_slope)},
              {"residual", format_number(r.residual)},
              {"tolerance", r.tolerance},
              {"window", {r.window_lo, r.window_hi}},
              {"fit_count", r.fit_count},
              {"verdict", r.pass ? "pass" : "fail"},
              {"csv", csv}};
}

struct SingleRun {
  std::vector<DecayReport> reports;
  json meta_reports = json::array();
  json meta;
};

SingleRun run_single(const ExperimentConfig& cfg, HarnessMode mode, const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "config.txt", config_echo(cfg));

  const auto lat = make_lattice(cfg.n, cfg.box_length);
  auto [f0, f1] = initial_data(cfg);
  const NonlinearityForm form = cfg.form();
  const MaterialParams& params = cfg.material;
  const bool verifying = mode == HarnessMode::verify && !cfg.claims.empty();

  bool need_profile = false;
  std::vector<const ClaimEntry*> entries;
  if (verifying) {
    for (const auto& c : cfg.claims) {
      entries.push_back(&find_claim(c.id));
      need_profile = need_profile || is_profile(entries.back()->target);
    }
  }
  if (need_profile && !cfg.schedule.empty() && cfg.schedule.front() != 0.0)
    throw ConfigError("profile claims need a schedule starting at t = 0 (moments integrate F from 0)");

  std::vector<std::vector<Sample>> samples(cfg.claims.size());
  MomentAccumulator moments_acc(form);
  std::vector<SolverState> kept;
  std::size_t snap_index = 0;
  double worst_residue = 0.0, worst_out_trunc = 0.0;
  if (cfg.snapshots != "none") fs::create_directories(dir / "snapshots");

  auto write_state = [&](const SolverState& s, const std::string& u_name, const std::string& ut_name) {
    write_snapshot(dir / u_name, s.u_hat, params, s.t);
    write_snapshot(dir / ut_name, s.ut_hat, params, s.t);
  };

  auto visit = [&](const SolverState& s) {
    worst_residue = std::max(worst_residue, s.diag.imaginary_residue);
    worst_out_trunc = std::max(worst_out_trunc, s.diag.output_truncation);
    const bool final = cfg.schedule.empty() || s.t == cfg.schedule.back();
    if (cfg.snapshots == "all" || (cfg.snapshots == "final" && final)) {
      write_state(s, snapshot_name("u", snap_index), snapshot_name("ut", snap_index));
    }
    ++snap_index;
    if (!verifying) return;
    if (need_profile) {
      moments_acc.add(s);
      kept.push_back(s);
    }
    if (!(s.t > 0.0)) return;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (is_profile(entries[i]->target)) continue;
      const auto& c = cfg.claims[i];
      samples[i].push_back({s.t, measure_quantity(params, form, s, entries[i]->target, c.p, c.alpha, c.ell, true)});
    }
  };

  if (cfg.band != Band::all) {
    const LinearFlow flow(params, lat, cfg.band);
    const std::vector<double> times = cfg.schedule.empty() ? std::vector<double>{0.0} : cfg.schedule;
    for (double t : times) {
      FieldPair p = linear_evolve(flow, f0, f1, t);
      SolverState s{t, std::move(p.u), std::move(p.ut), 0, {}};
      s.diag.imaginary_residue = imaginary_residue(to_physical(s.u_hat));
      visit(s);
    }
  } else {
    RunOptions opts;
    opts.h = cfg.step;
    opts.blowup_factor = cfg.blowup_factor;
    opts.no_wrap_horizon = cfg.no_wrap_horizon();
    opts.allow_wrap = cfg.allow_wrap;
    opts.keep_trajectory = false;
    opts.observer = visit;
    opts.on_blowup = [&](const SolverState& s) {
      fs::create_directories(dir / "snapshots");
      write_state(s, "snapshots/blowup_u.ewsp", "snapshots/blowup_ut.ewsp");
    };
    run(params, f0, f1, form, cfg.schedule, opts);
  }

  SingleRun out;
  out.meta = json{{"name", cfg.name},
                  {"no_wrap_horizon", cfg.no_wrap_horizon()},
                  {"allow_wrap", cfg.allow_wrap},
                  {"support", cfg.support()},
                  {"snapshots", snap_index},
                  {"max_imaginary_residue", worst_residue},
                  {"max_output_truncation", worst_out_trunc}};
  if (!verifying) return out;

  Moments moments;
  if (need_profile) {
    moments = data_moments(f0, f1);
    moments_acc.finish(moments);
    out.meta["moments"] = json{{"m1", moments.m1},
                               {"M", moments.M},
                               {"t_max", moments.t_max},
                               {"tail", moments.tail},
                               {"tail_bound", moments.tail_bound},
                               {"tail_slope", moments.tail_slope}};
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!is_profile(entries[i]->target)) continue;
      const auto& c = cfg.claims[i];
      for (const auto& s : kept) {
        if (!(s.t > 0.0)) continue;
        samples[i].push_back(
            {s.t, measure_quantity(params, form, s, entries[i]->target, c.p, c.alpha, c.ell, true, &moments)});
      }
    }
  }

  fs::create_directories(dir / "claims");
  VerifyOptions vo;
  vo.tolerance = cfg.tolerance;
  vo.t_min = cfg.t_min;
  vo.t_lo = cfg.t_lo;
  vo.t_hi = cfg.t_hi;
  vo.horizon = cfg.allow_wrap ? std::numeric_limits<double>::infinity() : cfg.no_wrap_horizon();
  vo.remove_mean = true;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& c = cfg.claims[i];
    DecayReport r = make_report(*entries[i], c.p, c.alpha, c.ell, samples[i], vo);
    write_report_csv(dir / claim_file(c), r);
    out.meta_reports.push_back(report_json(r, claim_file(c)));
    out.reports.push_back(std::move(r));
  }
  write_summary_csv(dir / "summary.csv", out.reports);
  return out;
}

std::vector<fs::path> list_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(fs::relative(e.path(), dir));
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg, HarnessMode mode, int exit_code,
                    const std::string& error) {
  json inputs = json::object();
  inputs["config"] = git_blob_hash(config_echo(cfg));
  if (!cfg.source.empty() && fs::exists(cfg.source)) inputs["config_file"] = git_blob_hash_file(cfg.source);
  for (const DataSpec* d : {&cfg.f0, &cfg.f1}) {
    if (d->kind == "file") inputs[d->path] = git_blob_hash_file(d->path);
  }
  json files = json::array();
  for (const auto& rel : list_files(dir)) {
    files.push_back(json{{"path", rel.generic_string()},
                         {"sha1", git_blob_hash_file(dir / rel)},
                         {"bytes", fs::file_size(dir / rel)}});
  }
  json settings = json::array();
  for (const auto& [k, v] : cfg.entries) settings.push_back(json{{"key", k}, {"value", v}});
  json m{{"name", cfg.name},
         {"mode", mode == HarnessMode::verify ? "verify" : "simulate"},
         {"exit_code", exit_code},
         {"settings", settings},
         {"inputs", inputs},
         {"files", files}};
  if (!error.empty()) m["error"] = error;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

fs::path resolve_output_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("EWAVE_OUTPUT_DIR"); env && *env) return fs::path(env);
  return fs::path(cfg.output_dir);
}

std::pair<VectorField, VectorField> initial_data(const ExperimentConfig& cfg) {
  const auto lat = make_lattice(cfg.n, cfg.box_length);
  // Distinct streams for f0 and f1 from one seed.
  VectorField f0 = generate_field(cfg.f0, lat, cfg.epsilon, cfg.seed * 2 + 0);
  VectorField f1 = generate_field(cfg.f1, lat, cfg.epsilon, cfg.seed * 2 + 1);
  return {std::move(f0), std::move(f1)};
}

RunOutcome run_experiment(const ExperimentConfig& cfg, HarnessMode mode) {
  RunOutcome out;
  out.dir = resolve_output_dir(cfg);
  try {
    fs::create_directories(out.dir);
    const auto runs = expand_sweep(cfg);
    json meta{{"runs", json::array()}, {"reports", json::array()}};

    if (runs.size() == 1) {
      SingleRun r = run_single(runs[0], mode, out.dir);
      meta["runs"].push_back(r.meta);
      meta["reports"] = r.meta_reports;
      out.reports = std::move(r.reports);
    } else {
      std::ostringstream index;
      index << "run,dir";
      for (const auto& [key, values] : cfg.sweep) index << ',' << key;
      index << '\n';
      std::vector<std::string> names;
      for (std::size_t i = 0; i < runs.size(); ++i) {
        std::ostringstream name;
        name << "run_" << std::setw(3) << std::setfill('0') << i;
        names.push_back(name.str());
      }
      std::vector<SingleRun> results(runs.size());
      const std::size_t width = static_cast<std::size_t>(cfg.sweep_parallel);
      for (std::size_t start = 0; start < runs.size(); start += width) {
        std::vector<std::future<SingleRun>> batch;
        for (std::size_t i = start; i < std::min(runs.size(), start + width); ++i) {
          batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                     [&, i] { return run_single(runs[i], mode, out.dir / names[i]); }));
        }
        for (std::size_t j = 0; j < batch.size(); ++j) results[start + j] = batch[j].get();
      }
      for (std::size_t i = 0; i < runs.size(); ++i) {
        index << i << ',' << names[i];
        for (const auto& [key, values] : cfg.sweep) {
          std::string v;
          for (const auto& [k, val] : runs[i].entries) {
            if (k == key) v = val;
          }
          index << ',' << v;
        }
        index << '\n';
        json rm = results[i].meta;
        rm["dir"] = names[i];
        meta["runs"].push_back(rm);
        for (auto rj : results[i].meta_reports) {
          rj["csv"] = names[i] + "/" + rj["csv"].get<std::string>();
          rj["run"] = names[i];
          meta["reports"].push_back(rj);
        }
        for (auto& r : results[i].reports) out.reports.push_back(std::move(r));
      }
      write_text(out.dir / "sweep.csv", index.str());
      if (mode == HarnessMode::verify && !out.reports.empty()) write_summary_csv(out.dir / "summary.csv", out.reports);
    }
    if (mode == HarnessMode::verify) write_text(out.dir / "report_meta.json", meta.dump(2) + "\n");
    out.exit_code = 0;
    for (const auto& r : out.reports) {
      if (!r.pass) out.exit_code = 1;
    }
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.error = e.what();
  }
  try {
    write_manifest(out.dir, cfg, mode, out.exit_code, out.error);
  } catch (const std::exception& e) {
    if (out.error.empty()) out.error = e.what();
    out.exit_code = 2;
  }
  return out;
}

namespace {

std::vector<Sample> read_samples(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "t,value,envelope,ratio") throw Error(path.string() + ": unexpected header");
  std::vector<Sample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t, v;
    std::getline(row, t, ',');
    std::getline(row, v, ',');
    out.push_back({std::stod(t), std::stod(v)});
  }
  return out;
}

}  // namespace

int render_report(const fs::path& dir, std::ostream& out) {
  std::ifstream in(dir / "report_meta.json");
  if (!in) throw Error("no report_meta.json in " + dir.string());
  const json meta = json::parse(in);
  std::vector<DecayReport> reports;
  for (const auto& rj : meta.at("reports")) {
    const ClaimEntry& claim = find_claim(rj.at("claim").get<std::string>());
    VerifyOptions vo;
    vo.tolerance = rj.at("tolerance").get<double>();
    vo.t_lo = rj.at("window")[0].get<double>();
    vo.t_hi = rj.at("window")[1].get<double>();
    const double p = std::stod(rj.at("p").get<std::string>());
    reports.push_back(make_report(claim, p, rj.at("alpha").get<double>(), rj.at("ell").get<int>(),
                                  read_samples(dir / rj.at("csv").get<std::string>()), vo));
  }
  write_summary_csv(dir / "summary.csv", reports);
  print_reports(reports, out);
  for (const auto& r : reports) {
    if (!r.pass) return 1;
  }
  return 0;
}

void print_reports(const std::vector<DecayReport>& reports, std::ostream& out) {
  for (const auto& r : reports) {
    out << (r.pass ? "PASS " : "FAIL ") << r.claim_id << "  " << r.label << "  fitted " << format_number(r.fitted_slope)
        << "  theoretical " << format_number(r.theoretical_slope) << "  (" << to_string(r.comparison) << ", tol "
        << format_number(r.tolerance) << ", window [" << format_number(r.window_lo) << ", "
        << format_number(r.window_hi) << "])\n";
  }
}

}  // namespace ewave
