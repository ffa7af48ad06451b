#include "ewave/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "ewave/oracle/mode_ode.hpp"
#include "ewave/symbols.hpp"

namespace ewave {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

std::string KernelSelftestResult::summary() const {
  std::ostringstream s;
  s.precision(3);
  s << draws << " draws, worst relative error " << worst_error << " (near double root " << worst_near_double
    << ") at beta=" << worst_beta << " nu=" << worst_nu << " r=" << worst_r << " t=" << worst_t << ", "
    << oracle_steps << " oracle steps, " << seconds << " s";
  return s.str();
}

KernelSelftestResult kernel_selftest(const KernelSelftestOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(opts.seed);
  KernelSelftestResult res;
  for (std::size_t i = 0; i < opts.draws; ++i) {
    const bool near = i < opts.near_double;
    const double beta = uniform(rng, opts.beta_lo, opts.beta_hi);
    const double nu = uniform(rng, opts.nu_lo, opts.nu_hi);
    const double r = near ? 2.0 * beta / nu + uniform(rng, -1e-6, 1e-6) : uniform(rng, 0.0, opts.r_max);
    const double t = uniform(rng, 0.0, opts.t_max);
    const MaterialParams params{0.0, 1.0, nu};
    const KernelValues k = kernel_multipliers(params, beta, r, t);
    const auto o = oracle::integrate_mode(nu, beta, r, t);
    res.oracle_steps += o.steps;
    const double e0 = std::hypot(k.K0 - o.phi[0][0], k.dtK0 - o.phi[1][0]) / std::hypot(o.phi[0][0], o.phi[1][0]);
    const double e1 = std::hypot(k.K1 - o.phi[0][1], k.dtK1 - o.phi[1][1]) / std::hypot(o.phi[0][1], o.phi[1][1]);
    double e = std::max(e0, e1);
    if (std::isnan(e)) e = INFINITY;
    if (near) res.worst_near_double = std::max(res.worst_near_double, e);
    if (e > res.worst_error || i == 0) {
      res.worst_error = e;
      res.worst_beta = beta;
      res.worst_nu = nu;
      res.worst_r = r;
      res.worst_t = t;
    }
    ++res.draws;
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.pass = res.worst_error <= opts.tolerance;
  return res;
}

double semigroup_defect(std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double beta = uniform(rng, 0.5, 1.5);
    const double nu = uniform(rng, 0.5, 3.0);
    const double r = uniform(rng, 0.0, 10.0);
    const double t = uniform(rng, 0.0, 20.0);
    const double s = uniform(rng, 0.0, 20.0);
    const MaterialParams params{0.0, 1.0, nu};
    const auto a = kernel_multipliers(params, beta, r, t);
    const auto b = kernel_multipliers(params, beta, r, s);
    const auto c = kernel_multipliers(params, beta, r, t + s);
    // E = [[K0, K1], [dtK0, dtK1]]
    const double p00 = a.K0 * b.K0 + a.K1 * b.dtK0;
    const double p01 = a.K0 * b.K1 + a.K1 * b.dtK1;
    const double p10 = a.dtK0 * b.K0 + a.dtK1 * b.dtK0;
    const double p11 = a.dtK0 * b.K1 + a.dtK1 * b.dtK1;
    const double scale = std::max({1.0, std::abs(c.K0), std::abs(c.K1), std::abs(c.dtK0), std::abs(c.dtK1)});
    const double e = std::max({std::abs(p00 - c.K0), std::abs(p01 - c.K1), std::abs(p10 - c.dtK0),
                               std::abs(p11 - c.dtK1)}) / scale;
    worst = std::max(worst, std::isnan(e) ? INFINITY : e);
  }
  return worst;
}

}  // namespace ewave
