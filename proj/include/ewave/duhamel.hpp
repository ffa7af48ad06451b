#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ewave/lattice.hpp"
#include "ewave/propagator.hpp"
#include "ewave/symbols.hpp"

namespace ewave {

enum class NonlinearityKind { grad_grad2, grad_gradt, custom };

// One bilinear contribution to F_k:
//   coef * (d_a u_j) * (d_b d_c u_m)        when time == false
//   coef * (d_a u_j) * (d_b d_t u_m)        when time == true (c unused)
// Axis and component indices are 0-based.
struct BilinearTerm {
  int k = 0;
  int a = 0;
  int j = 0;
  int b = 0;
  int c = 0;
  int m = 0;
  bool time = false;
  double coef = 1.0;
};

struct NonlinearityForm {
  NonlinearityKind kind = NonlinearityKind::grad_grad2;
  std::vector<BilinearTerm> terms;

  // F_k = sum_{a,b} (d_a u_b)(d_a d_b u_k)
  static NonlinearityForm grad_grad2();
  // F_k = sum_{a,b} (d_a u_b)(d_b d_t u_k)
  static NonlinearityForm grad_gradt();
  static NonlinearityForm custom(std::vector<BilinearTerm> terms);
  // Custom form with no terms: F = 0.
  static NonlinearityForm none();

  bool uses_time_derivative() const;
  bool is_zero() const { return terms.empty(); }
  void validate() const;
};

const char* to_string(NonlinearityKind kind);
NonlinearityForm nonlinearity_from_string(const std::string& name);
// Parses "k:a:j:b:c:m:coef" entries separated by ';' (c = 't' for a time factor).
std::vector<BilinearTerm> parse_terms(const std::string& spec);

struct SolverDiagnostics {
  double max_abs_u = 0.0;       // physical max, refreshed at snapshots
  double max_abs_u_bound = 0.0; // spectral l1 bound, refreshed every step
  double input_truncation = 0.0;  // spectral energy fraction of u removed by the 2/3 mask
  double output_truncation = 0.0; // same for the raw product before masking
  double imaginary_residue = 0.0; // of physical u at snapshots
};

struct SolverState {
  double t = 0.0;
  VectorField u_hat;
  VectorField ut_hat;
  long steps = 0;
  SolverDiagnostics diag;
};

struct NonlinearityResult {
  VectorField F;  // spectral, 2/3-masked
  double input_truncation = 0.0;
  double output_truncation = 0.0;
};

// Pseudo-spectral evaluator that keeps its scratch buffers between calls.
class NonlinearEvaluator {
 public:
  NonlinearEvaluator(const FrequencyLattice& lattice, NonlinearityForm form);
  NonlinearityResult operator()(const VectorField& u_hat, const VectorField& ut_hat);
  const NonlinearityForm& form() const { return form_; }

 private:
  struct Factor {
    int axis1, axis2, comp;  // axis2 < 0: first derivative only
    bool time;
  };
  void transform_pair(const VectorField& u_hat, const VectorField& ut_hat, const Factor* f, const Factor* g);

  FrequencyLattice lattice_;
  NonlinearityForm form_;
  std::vector<Factor> first_;
  std::vector<Factor> second_;
  std::vector<std::vector<std::pair<int, const BilinearTerm*>>> terms_by_second_;
  std::vector<RealBuffer> first_values_;
  std::array<RealBuffer, 3> acc_;
  RealBuffer second_a_, second_b_;
  ComplexBuffer scratch_;
  std::vector<char> keep_;  // per-axis 2/3 mask, indexed by FFT index
};

NonlinearityResult eval_nonlinearity_detailed(const NonlinearityForm& form, const SolverState& state);
VectorField eval_nonlinearity(const NonlinearityForm& form, const SolverState& state);

// h = min(0.1, 0.5 / (nu * xi_max^2)) with xi_max the per-axis Nyquist frequency.
double default_step(const MaterialParams& params, const FrequencyLattice& lattice);

// Exponential midpoint stepper. Tables of E(t) are cached per step length.
class DuhamelSolver {
 public:
  DuhamelSolver(const MaterialParams& params, const FrequencyLattice& lattice, NonlinearityForm form);

  SolverState initial_state(const VectorField& f0, const VectorField& f1);
  // Advances in place by h > 0; throws BlowUpError past the threshold.
  void step(SolverState& state, double h);
  // Recomputes max |u| and the imaginary residue from a physical transform.
  void refresh_diagnostics(SolverState& state) const;

  // Bound on max |u|; defaults to 1e6 x the initial max |f0|, |f1|.
  void set_blowup_threshold(double bound) { threshold_ = bound; }
  // Multiple of the initial max |u| used by initial_state to set the threshold.
  void set_blowup_factor(double factor) { blowup_factor_ = factor; }
  double blowup_threshold() const { return threshold_; }

  const LinearFlow& flow() const { return flow_; }
  const NonlinearityForm& form() const { return eval_.form(); }

 private:
  const KernelTable& table(double t);

  LinearFlow flow_;
  NonlinearEvaluator eval_;
  std::map<double, std::unique_ptr<KernelTable>> tables_;
  FieldPair mid_;
  FieldPair next_;
  double threshold_ = INFINITY;
  double blowup_factor_ = 1e6;
};

SolverState nonlinear_step(const MaterialParams& params, const SolverState& state, double h,
                           const NonlinearityForm& form);

struct RunOptions {
  double h = 0.0;               // 0 selects default_step
  double blowup_factor = 1e6;   // threshold multiple of the initial max |u|
  double no_wrap_horizon = INFINITY;
  bool allow_wrap = false;
  bool keep_trajectory = true;  // false: only the observer sees the snapshots
  std::function<void(const SolverState&)> observer;
  std::function<void(const SolverState&)> on_blowup;  // last good state, before the throw
};

// Snapshots at each scheduled time (t = 0 yields the initial state); an empty
// schedule yields just the initial state. The final substep before each
// output time is shortened so the snapshot lands exactly.
std::vector<SolverState> run(const MaterialParams& params, const VectorField& f0, const VectorField& f1,
                             const NonlinearityForm& form, const std::vector<double>& schedule,
                             const RunOptions& opts = {});

}  // namespace ewave
