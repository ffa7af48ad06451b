#pragma once

#include <array>

// Reference integrator for the single-mode damped wave ODE
//   w'' + nu r^2 w' + beta^2 r^2 w = 0.
// It knows nothing about the closed-form kernels and is used only to check them.

namespace ewave::oracle {

struct ModeOdeOptions {
  double rtol = 1e-13;       // local error per step, relative to |Phi|
  double initial_step = 0.0; // 0 picks one from the stiffness
  long max_steps = 2'000'000;
};

// Fundamental matrix Phi(t) with Phi(0) = I for the first-order system
// (w, w')' = [[0, 1], [-beta^2 r^2, -nu r^2]] (w, w').
// Column 0 starts at (1, 0), column 1 at (0, 1).
struct ModeOdeResult {
  std::array<std::array<double, 2>, 2> phi{};  // phi[row][col]
  long steps = 0;
  long rejected = 0;
};

ModeOdeResult integrate_mode(double nu, double beta, double r, double t, const ModeOdeOptions& opts = {});

}  // namespace ewave::oracle
