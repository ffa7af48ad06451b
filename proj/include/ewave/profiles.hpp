#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "ewave/duhamel.hpp"
#include "ewave/lattice.hpp"
#include "ewave/symbols.hpp"

namespace ewave {

// Moments of the data and of the nonlinear term.
//   m0[k][a] = int d_a f0_k,  m1[k] = int f1_k,  M[k] = int_0^inf int F_k(u).
struct Moments {
  std::array<std::array<double, 3>, 3> m0{};
  std::array<double, 3> m1{};
  std::array<double, 3> M{};
  double t_max = 0.0;       // end of the trapezoid part of M
  std::array<double, 3> tail{};  // power-law extrapolation past t_max, included in M
  double tail_bound = 0.0;  // bound on |int_{t_max}^inf int F| from the fitted |F|_1 decay
  double tail_slope = 0.0;  // fitted log-log slope of |F(t)|_1
};

// m0 and m1 by lattice quadrature; M left at zero.
Moments data_moments(const VectorField& f0, const VectorField& f1);

// Integrates int F_k(u) dy over a sequence of states with increasing times.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(NonlinearityForm form);

  void add(const SolverState& state);
  void add_sample(double t, const std::array<double, 3>& integral, double l1_norm);
  std::size_t size() const { return times_.size(); }

  // Trapezoid plus power-law tail. Throws InsufficientHorizon unless the |F|_1
  // slope over the last decade is <= -1.5. A zero form gives M = 0.
  void finish(Moments& m) const;

 private:
  NonlinearityForm form_;
  std::vector<double> times_;
  std::vector<std::array<double, 3>> integrals_;
  std::vector<double> l1_;
};

// The trajectory must start at t = 0 and be dense enough for the trapezoid rule.
Moments compute_moments(const VectorField& f0, const VectorField& f1, const std::vector<SolverState>& trajectory,
                        const NonlinearityForm& form);

// Physical field of the diffusion wave G_j^(beta)(t) times the constant vector v,
// spectral data (2pi)^{-3/2} G_j(t, xi) v, optionally times xi_a xi_b/|xi|^2 and a band cutoff.
VectorField diffusion_wave_field(const MaterialParams& params, double beta, int j, double t,
                                 const FrequencyLattice& lattice,
                                 std::optional<std::pair<int, int>> riesz = std::nullopt, Band band = Band::all,
                                 std::array<double, 3> v = {1.0, 0.0, 0.0});

// Applies the multiplier G_j^(beta)(t, xi) [xi_a xi_b/|xi|^2] [chi_band] to g. Spectral result.
VectorField diffusion_wave_apply(const MaterialParams& params, double beta, int j, double t, const VectorField& g,
                                 std::optional<std::pair<int, int>> riesz = std::nullopt, Band band = Band::all);

enum class ProfileKind { G, H, Gtilde };

const char* to_string(ProfileKind kind);

// Asymptotic profiles; spectral, zero mode set to 0.
VectorField profile_field(ProfileKind kind, const Moments& moments, const MaterialParams& params, double t,
                          const FrequencyLattice& lattice);
VectorField profile_G(const Moments& moments, const MaterialParams& params, double t, const FrequencyLattice& lattice);
VectorField profile_H(const Moments& moments, const MaterialParams& params, double t, const FrequencyLattice& lattice);
VectorField profile_Gtilde(const Moments& moments, const MaterialParams& params, double t,
                           const FrequencyLattice& lattice);

// |grad^alpha (d_t^ell u - profile)|_p on one state, mean removed;
// ell = 0, 1, 2 for G, H, Gtilde.
double profile_gap_value(const MaterialParams& params, const NonlinearityForm& form, const SolverState& state,
                         const Moments& moments, ProfileKind kind, int alpha, double p);

struct GapSample {
  double t = 0.0;
  double gap = 0.0;
  double envelope = 0.0;  // t^e with e from the matching convergence claim
  double ratio = 0.0;
};

std::vector<GapSample> profile_gap(const MaterialParams& params, const NonlinearityForm& form,
                                   const std::vector<SolverState>& trajectory, const Moments& moments,
                                   ProfileKind kind, int alpha, double p);

// True when every successive ratio is strictly smaller (or both are zero).
bool ratios_decreasing(const std::vector<double>& ratios);

// |(RaRb G0^(beta)(t) chi_L - RaRb G0^(gamma)(t) chi_L) g|_1 / (t^{1/2} |g|_1).
double diffusion_difference_ratio(const MaterialParams& params, double beta, double gamma, double t,
                                  const VectorField& g, int a, int b);

}  // namespace ewave
