#include "ewave/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ewave/errors.hpp"
#include "ewave/log.hpp"

namespace ewave {

double default_step(const MaterialParams& params, const FrequencyLattice& lattice) {
  const double xi_max = lattice.max_frequency();
  return std::min(0.1, 0.5 / (params.nu * xi_max * xi_max));
}

namespace {

double max_magnitude_physical(const VectorField& physical) {
  const auto& lat = physical.lattice();
  double best = 0.0;
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += std::norm(physical.at(c, idx));
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

// max |u(x)| <= (2pi)^{3/2}/V * sum_xi |u_hat(xi)|; NaN propagates.
double spectral_sup_bound(const VectorField& u_hat) {
  const auto& lat = u_hat.lattice();
  double sum = 0.0;
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += std::norm(u_hat.at(c, idx));
    sum += std::sqrt(s);
  }
  return std::pow(2.0 * std::numbers::pi, 1.5) / lat.volume() * sum;
}

FieldPair empty_pair(const FrequencyLattice& lat) {
  return {VectorField(lat, Representation::spectral), VectorField(lat, Representation::spectral)};
}

}  // namespace

DuhamelSolver::DuhamelSolver(const MaterialParams& params, const FrequencyLattice& lattice, NonlinearityForm form)
    : flow_(params, lattice), eval_(lattice, std::move(form)), mid_(empty_pair(lattice)), next_(empty_pair(lattice)) {}

const KernelTable& DuhamelSolver::table(double t) {
  auto it = tables_.find(t);
  if (it != tables_.end()) return *it->second;
  auto [pos, inserted] = tables_.emplace(t, std::make_unique<KernelTable>(flow_, t));
  return *pos->second;
}

SolverState DuhamelSolver::initial_state(const VectorField& f0, const VectorField& f1) {
  require_same_lattice(f0, f1, "initial_state");
  if (!(f0.lattice() == flow_.lattice)) throw LatticeMismatch("initial_state: data lattice differs from the solver lattice");
  SolverState s{0.0, as_spectral(f0), as_spectral(f1), 0, {}};
  const double m0 = max_magnitude_physical(as_physical(f0));
  const double m1 = max_magnitude_physical(as_physical(f1));
  const double scale = std::max(m0, m1);
  threshold_ = scale > 0.0 ? blowup_factor_ * scale : INFINITY;
  refresh_diagnostics(s);
  return s;
}

void DuhamelSolver::refresh_diagnostics(SolverState& state) const {
  const VectorField u = to_physical(state.u_hat);
  state.diag.max_abs_u = max_magnitude_physical(u);
  state.diag.imaginary_residue = imaginary_residue(u);
  state.diag.max_abs_u_bound = spectral_sup_bound(state.u_hat);
}

void DuhamelSolver::step(SolverState& state, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("nonlinear_step: h must be positive and finite");
  const bool forced = !eval_.form().is_zero();
  if (tables_.size() > 32) tables_.clear();  // landing steps are one-offs
  const KernelTable& quarter = table(0.25 * h);
  const KernelTable& half = table(0.5 * h);
  const KernelTable& full = table(h);

  full.evolve(state.u_hat, state.ut_hat, next_);
  double in_trunc = 0.0, out_trunc = 0.0;
  if (forced) {
    // Predictor: exact linear half step, plus an exponential Euler forcing term
    // when F depends on u_t so that the midpoint u_t stays second order.
    half.evolve(state.u_hat, state.ut_hat, mid_);
    if (eval_.form().uses_time_derivative()) {
      const auto fn = eval_(state.u_hat, state.ut_hat);
      quarter.accumulate_forcing(fn.F, 0.5 * h, mid_);
    }
    const auto fmid = eval_(mid_.u, mid_.ut);
    half.accumulate_forcing(fmid.F, h, next_);
    in_trunc = fmid.input_truncation;
    out_trunc = fmid.output_truncation;
  }

  const double bound = spectral_sup_bound(next_.u);
  if (!std::isfinite(bound) || bound > threshold_) {
    const double actual = std::isfinite(bound) ? max_magnitude_physical(to_physical(next_.u)) : bound;
    if (!std::isfinite(actual) || actual > threshold_) {
      std::ostringstream msg;
      msg << "blow-up guard: max |u| = " << actual << " exceeds " << threshold_ << " at t = " << state.t + h;
      throw BlowUpError(msg.str(), state.t + h, actual, threshold_);
    }
  }

  std::swap(state.u_hat, next_.u);
  std::swap(state.ut_hat, next_.ut);
  state.t += h;
  ++state.steps;
  state.diag.max_abs_u_bound = bound;
  state.diag.input_truncation = in_trunc;
  state.diag.output_truncation = out_trunc;
}

SolverState nonlinear_step(const MaterialParams& params, const SolverState& state, double h,
                           const NonlinearityForm& form) {
  DuhamelSolver solver(params, state.u_hat.lattice(), form);
  SolverState next = state;
  solver.step(next, h);
  return next;
}

std::vector<SolverState> run(const MaterialParams& params, const VectorField& f0, const VectorField& f1,
                             const NonlinearityForm& form, const std::vector<double>& schedule,
                             const RunOptions& opts) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!std::isfinite(schedule[i]) || schedule[i] < 0.0) {
      throw std::invalid_argument("run: schedule times must be finite and >= 0");
    }
    if (i > 0 && !(schedule[i] > schedule[i - 1])) throw std::invalid_argument("run: schedule must be increasing");
  }
  if (!schedule.empty() && schedule.back() > opts.no_wrap_horizon && !opts.allow_wrap) {
    std::ostringstream msg;
    msg << "run: final time " << schedule.back() << " exceeds the no-wrap horizon " << opts.no_wrap_horizon;
    throw std::invalid_argument(msg.str());
  }

  DuhamelSolver solver(params, f0.lattice(), form);
  solver.set_blowup_factor(opts.blowup_factor);
  SolverState state = solver.initial_state(f0, f1);
  const double h = opts.h > 0.0 ? opts.h : default_step(params, f0.lattice());

  std::vector<SolverState> out;
  auto emit = [&](const SolverState& s) {
    if (opts.observer) opts.observer(s);
    if (opts.keep_trajectory) out.push_back(s);
  };
  if (schedule.empty()) {
    emit(state);
    return out;
  }

  for (double target : schedule) {
    while (state.t < target) {
      const double remaining = target - state.t;
      const bool last = remaining <= h * (1.0 + 1e-9);
      try {
        solver.step(state, last ? remaining : h);
      } catch (const BlowUpError&) {
        if (opts.on_blowup) opts.on_blowup(state);
        throw;
      }
      if (last) state.t = target;
    }
    solver.refresh_diagnostics(state);
    if (state.diag.imaginary_residue > 1e-10) {
      std::ostringstream msg;
      msg << "t = " << state.t << ": imaginary residue " << state.diag.imaginary_residue;
      log_warning(msg.str());
    }
    emit(state);
  }
  return out;
}

}  // namespace ewave
