// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
// Usage: acceptance [criterion numbers...]   (default: all ten)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ewave/claims.hpp"
#include "ewave/config.hpp"
#include "ewave/duhamel.hpp"
#include "ewave/generators.hpp"
#include "ewave/metrology.hpp"
#include "ewave/norms.hpp"
#include "ewave/profiles.hpp"
#include "ewave/propagator.hpp"
#include "ewave/selftest.hpp"

using namespace ewave;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

VectorField gaussian(const FrequencyLattice& lat, double amp, double width, std::array<double, 3> v) {
  return sample_field(lat, [&](double x, double y, double z) {
    const double g = amp * std::exp(-(x * x + y * y + z * z) / (2 * width * width));
    return std::array<double, 3>{v[0] * g, v[1] * g, v[2] * g};
  });
}

// Horizon of a config-equivalent setup, from the harness's support rule.
double horizon_for(const MaterialParams& p, int n, double L, double width) {
  ExperimentConfig cfg;
  cfg.material = p;
  cfg.n = n;
  cfg.box_length = L;
  cfg.f0.kind = "zero";
  cfg.f1.kind = "gaussian";
  cfg.f1.width = width;
  return cfg.no_wrap_horizon();
}

Verdict kernel_oracle() {
  const KernelSelftestOptions opts;
  const auto r = kernel_selftest(opts);
  return {r.pass && r.draws >= 10000 && opts.near_double >= 100 && r.seconds < 60.0,
          r.summary() + "; " + std::to_string(opts.near_double) + " draws within 1e-6 of r = 2 beta / nu"};
}

Verdict semigroup() {
  const auto start = std::chrono::steady_clock::now();
  const double d = semigroup_defect(1000, 7);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {d <= 1e-10, "1000 draws, worst defect " + fmt(d, 3) + " (bound 1e-10), " + fmt(s, 2) + " s"};
}

Verdict linear_sup_decay() {
  const MaterialParams p{0.0, 1.0, 1.0};
  const double width = 1.0;
  const auto lat = make_lattice(128, 128.0);
  const auto f1 = gaussian(lat, 1.0, width, {1.0, 0.0, 0.0});
  const VectorField f0(lat, Representation::physical);
  const LinearFlow flow(p, lat);
  const double horizon = horizon_for(p, 128, 128.0, width);
  std::vector<Sample> all;
  for (double t = 10.0; t <= 50.0 + 1e-9; t += 2.5) all.push_back({t, lp_norm(linear_evolve(flow, f0, f1, t).u, INFINITY)});
  const double hi = std::min(50.0, horizon);
  const RateFit fit = fit_rate(all, 10.0, hi);
  const RateFit raw = fit_rate(all, 10.0, 50.0);
  const bool pass = std::abs(fit.slope + 1.5) <= 0.15;
  return {pass, "|u|_inf slope " + fmt(fit.slope) + " over [10, " + fmt(hi) + "] (" + std::to_string(fit.count) +
                    " samples, target -1.5 +/- 0.15); no-wrap horizon " + fmt(hi) + ", slope over the full [10, 50] " +
                    fmt(raw.slope) + " includes wrapped images"};
}

Verdict high_band_decay() {
  const MaterialParams p{1.0, 1.0, 1.0};
  const auto lat = make_lattice(32, 2 * M_PI);
  DataSpec probe;
  probe.kind = "broadband";
  probe.kmax = 16;
  const auto f0 = generate_field(probe, lat, 1.0, 11);
  const VectorField f1(lat, Representation::physical);
  const LinearFlow flow(p, lat, Band::high);
  std::vector<double> ts, logs;
  for (double t = 1.0; t <= 20.0 + 1e-9; t += 1.0) {
    ts.push_back(t);
    logs.push_back(std::log(lp_norm(linear_evolve(flow, f0, f1, t).u, 2.0)));
  }
  const AffineFit fit = fit_affine(ts, logs);
  const auto cuts = BandCutoffs::for_material(p);
  const auto roots = characteristic_roots(p, p.slow_speed(), cuts.c1);
  const double predicted = roots.sigma_plus.real();
  const bool real_root = roots.sigma_plus.imag() == 0.0;
  const bool pass = real_root && fit.r2 >= 0.99 && fit.slope <= 0.9 * predicted;
  return {pass, "log|u|_2 slope " + fmt(fit.slope) + ", R^2 " + fmt(fit.r2, 6) + "; real root at r = c1 = " +
                    fmt(cuts.c1) + " is " + fmt(predicted) + ", bound 0.9 x that = " + fmt(0.9 * predicted)};
}

// One nonlinear run shared by criteria 5, 6 and 7.
struct NonlinearRun {
  std::vector<Sample> grad_l2, ut_l2, grad_l1;
  std::vector<SolverState> kept;
  Moments moments;
  double horizon = 0.0;
  double seconds = 0.0;
  std::string error;
};

const NonlinearRun& nonlinear_run() {
  static NonlinearRun run = [] {
    NonlinearRun r;
    const auto start = std::chrono::steady_clock::now();
    const MaterialParams p{0.0, 1.0, 1.0};
    const double eps = 1e-3, width = 1.0;
    const auto lat = make_lattice(128, 128.0);
    const VectorField f0(lat, Representation::physical);
    const auto f1 = gaussian(lat, eps, width, {1.0, 0.5, -0.25});
    const auto form = NonlinearityForm::grad_grad2();
    r.horizon = horizon_for(p, 128, 128.0, width);
    r.moments = data_moments(f0, f1);
    MomentAccumulator acc(form);

    std::vector<double> schedule;
    for (int i = 0; i <= 256; ++i) schedule.push_back(0.25 * i);
    RunOptions opts;
    opts.keep_trajectory = false;
    opts.no_wrap_horizon = r.horizon;
    opts.allow_wrap = true;  // criterion 7 samples t = 64
    opts.observer = [&](const SolverState& s) {
      acc.add(s);
      const double t = s.t;
      if (t >= 5.0 && t <= 40.0 && std::abs(t - std::round(t)) < 1e-9) {
        r.grad_l2.push_back({t, derivative_norm(s.u_hat, 1, 2.0, true)});
        r.grad_l1.push_back({t, derivative_norm(s.u_hat, 1, 1.0, true)});
        r.ut_l2.push_back({t, lp_norm(without_mean(s.ut_hat), 2.0)});
      }
      if (t == 8.0 || t == 16.0 || t == 32.0 || t == 64.0) r.kept.push_back(s);
    };
    try {
      ewave::run(p, f0, f1, form, schedule, opts);
      acc.finish(r.moments);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }();
  return run;
}

Verdict nonlinear_decay() {
  const auto& r = nonlinear_run();
  if (!r.error.empty()) return {false, r.error};
  const RateFit g = fit_rate(r.grad_l2, 5.0, 40.0);
  const RateFit v = fit_rate(r.ut_l2, 5.0, 40.0);
  const bool pass = std::abs(g.slope + 0.75) <= 0.15 && std::abs(v.slope + 0.75) <= 0.2;
  return {pass, "|grad u|_2 slope " + fmt(g.slope) + " (target -0.75 +/- 0.15), |u_t|_2 slope " + fmt(v.slope) +
                    " (target -0.75 +/- 0.2) over [5, 40]; no-wrap horizon " + fmt(r.horizon) + "; run " +
                    fmt(r.seconds, 3) + " s"};
}

Verdict l1_growth() {
  const auto& r = nonlinear_run();
  if (!r.error.empty()) return {false, r.error};
  const RateFit g = fit_rate(r.grad_l1, 5.0, 40.0);
  return {g.slope <= 0.6, "|grad u|_1 slope " + fmt(g.slope) + " over [5, 40] (ceiling 0.5 + 0.1)"};
}

Verdict profile_trend() {
  const auto& r = nonlinear_run();
  if (!r.error.empty()) return {false, r.error};
  if (r.kept.size() != 4) return {false, "missing snapshots"};
  const MaterialParams p{0.0, 1.0, 1.0};
  const auto form = NonlinearityForm::grad_grad2();
  std::vector<double> rg, rh;
  for (const auto& s : r.kept) {
    const double env = std::pow(s.t, -0.75);
    rg.push_back(profile_gap_value(p, form, s, r.moments, ProfileKind::G, 1, 2.0) / env);
    rh.push_back(profile_gap_value(p, form, s, r.moments, ProfileKind::H, 0, 2.0) / env);
  }
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ", ") + fmt(x, 3);
    return s;
  };
  const bool pass = ratios_decreasing(rg) && ratios_decreasing(rh);
  return {pass, "t = 8, 16, 32, 64: |grad(u - G)|_2 / t^-0.75 = [" + list(rg) + "], |u_t - H|_2 / t^-0.75 = [" +
                    list(rh) + "]; M tail slope " + fmt(r.moments.tail_slope, 3)};
}

Verdict diffusion_difference() {
  const MaterialParams p{1.0, 1.0, 1.0};
  const auto lat = make_lattice(192, 288.0);
  const auto g = gaussian(lat, 1.0, 1.0, {1.0, 0.0, 0.0});
  std::vector<double> ratios;
  std::string s;
  bool finite = true;
  for (double t : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    const double v = diffusion_difference_ratio(p, p.fast_speed(), p.slow_speed(), t, g, 0, 0);
    finite = finite && std::isfinite(v);
    ratios.push_back(v);
    s += (s.empty() ? "" : ", ") + fmt(v, 4);
  }
  double sup = 0.0;
  for (double v : ratios) sup = std::max(sup, v);
  const std::size_t n = ratios.size();
  const bool non_increasing = ratios[n - 2] <= ratios[n - 3] && ratios[n - 1] <= ratios[n - 2];
  return {finite && non_increasing, "ratio at t = 4, 8, 16, 32, 64: [" + s + "], sup " + fmt(sup, 4) +
                                        "; last three non-increasing: " + (non_increasing ? "yes" : "no")};
}

Verdict exponent_identity() {
  const double ps[] = {1.0, 1.5, 2.0, 3.0, 6.0, INFINITY};
  struct Pair {
    const char* intro;
    const char* main;
    std::function<double(double, double)> literal_intro;
    std::function<double(double, double)> literal_main;
  };
  auto q = [](double p) { return std::isinf(p) ? 0.0 : 1.0 / p; };
  const std::vector<Pair> pairs = {
      {"u_decay", "u_decay_lp", [&](double p, double a) { return -1.5 * (1 - q(p)) + q(p) - a / 2; },
       [&](double p, double a) { return -2.5 * (1 - q(p)) + 1 - a / 2; }},
      {"ut_decay", "ut_decay_lp", [&](double p, double a) { return -1.5 * (1 - q(p)) + q(p) - 0.5 - a / 2; },
       [&](double p, double a) { return -2.5 * (1 - q(p)) + 0.5 - a / 2; }},
      {"grad2_ut_smoothing", "grad2_ut_lp", [&](double p, double a) { return -1.5 * (1 - q(p)) + q(p) - 0.5 - a / 2; },
       [&](double p, double a) { return -2.5 * (1 - q(p)) + 0.5 - a / 2; }},
      {"utt_smoothing", "utt_lp", [&](double p, double) { return -1.5 * (1 - q(p)) + q(p) - 1; },
       [&](double p, double) { return -2.5 * (1 - q(p)); }},
  };
  double worst = 0.0;
  int checked = 0;
  for (const auto& pr : pairs) {
    const auto& a = find_claim(pr.intro);
    const auto& b = find_claim(pr.main);
    for (double p : ps) {
      for (int alpha = 0; alpha <= 3; ++alpha) {
        const int ell = std::max(0, a.fixed_ell);
        const double ea = a.exponent.evaluate(p, alpha, ell);
        const double eb = b.exponent.evaluate(p, alpha, ell);
        worst = std::max({worst, std::abs(ea - eb), std::abs(ea - pr.literal_intro(p, alpha)),
                          std::abs(eb - pr.literal_main(p, alpha))});
        ++checked;
      }
    }
  }
  return {worst <= 1e-14, std::to_string(checked) + " (p, alpha) points over 4 families, worst difference " +
                              fmt(worst, 3) + " (bound 1e-14)"};
}

Verdict quadratic_smallness() {
  const MaterialParams p{0.0, 1.0, 1.0};
  const auto lat = make_lattice(64, 64.0);
  const double width = 2.0, t = 10.0;
  const LinearFlow flow(p, lat);
  std::vector<double> rel;
  std::string s;
  for (double eps : {4e-3, 2e-3, 1e-3}) {
    const auto f0 = gaussian(lat, eps, width, {0.5, 0.0, 0.0});
    const auto f1 = gaussian(lat, eps, width, {1.0, 0.5, -0.25});
    RunOptions opts;
    opts.no_wrap_horizon = horizon_for(p, 64, 64.0, width);
    const auto traj = run(p, f0, f1, NonlinearityForm::grad_grad2(), {t}, opts);
    const auto lin = linear_evolve(flow, f0, f1, t);
    const double num = lp_norm(without_mean(traj.back().u_hat - lin.u), 2.0);
    const double den = lp_norm(without_mean(lin.u), 2.0);
    rel.push_back(num / den);
    s += (s.empty() ? "" : ", ") + fmt(num / den, 4);
  }
  const double q1 = rel[0] / rel[1], q2 = rel[1] / rel[2];
  const bool pass = std::abs(q1 / 2 - 1) <= 0.3 && std::abs(q2 / 2 - 1) <= 0.3;
  return {pass, "relative gap at eps = 4e-3, 2e-3, 1e-3: [" + s + "], halving ratios " + fmt(q1) + ", " + fmt(q2) +
                    " (target 2 +/- 30%)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Verdict()>>> criteria = {
      {1, {"kernel oracle equivalence", kernel_oracle}},
      {2, {"propagator semigroup", semigroup}},
      {3, {"linear L1 -> Linf decay", linear_sup_decay}},
      {4, {"high-frequency exponential decay", high_band_decay}},
      {5, {"nonlinear decay", nonlinear_decay}},
      {6, {"L1 growth ceiling", l1_growth}},
      {7, {"profile convergence trend", profile_trend}},
      {8, {"diffusion-wave speed difference bound", diffusion_difference}},
      {9, {"exponent-table identity", exponent_identity}},
      {10, {"quadratic smallness", quadratic_smallness}},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [id, c] : criteria) selected.insert(id);

  int failures = 0;
  for (int id : selected) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::printf("C%d FAIL unknown criterion\n", id);
      ++failures;
      continue;
    }
    Verdict v;
    try {
      v = it->second.second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("C%d %s %s: %s\n", id, v.pass ? "PASS" : "FAIL", it->second.first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
