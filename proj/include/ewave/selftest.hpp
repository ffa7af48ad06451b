#pragma once

#include <cstdint>
#include <string>

namespace ewave {

struct KernelSelftestOptions {
  std::size_t draws = 10000;       // total draws, near-double-root ones included
  std::size_t near_double = 100;   // draws with |r - 2 beta/nu| <= 1e-6
  std::uint64_t seed = 20240601;
  double tolerance = 1e-8;
  double beta_lo = 0.5, beta_hi = 1.5;
  double nu_lo = 1.0, nu_hi = 3.0;
  double r_max = 50.0;
  double t_max = 100.0;
};

struct KernelSelftestResult {
  std::size_t draws = 0;
  double worst_error = 0.0;       // over all draws
  double worst_near_double = 0.0; // over the near-double-root draws
  double worst_beta = 0.0, worst_nu = 0.0, worst_r = 0.0, worst_t = 0.0;
  long oracle_steps = 0;
  double seconds = 0.0;
  bool pass = false;

  std::string summary() const;
};

// Compares (K0, dtK0) and (K1, dtK1) with the fundamental matrix from the ODE
// oracle. Error per column: |(K, dtK) - oracle| / |oracle| (Euclidean).
KernelSelftestResult kernel_selftest(const KernelSelftestOptions& opts = {});

// Per-mode semigroup check E(t+s) = E(t) E(s) on random (beta, nu, r, t, s);
// returns the worst entry error relative to max(1, |E(t+s)|).
double semigroup_defect(std::size_t draws, std::uint64_t seed);

}  // namespace ewave
