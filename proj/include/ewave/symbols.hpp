#pragma once

#include <complex>
#include <string>

#include "ewave/lattice.hpp"

namespace ewave {

// Lame constants and viscosity. Valid when mu > 0, lambda + 2 mu > 0, nu > 0.
struct MaterialParams {
  double lambda = 0.0;
  double mu = 1.0;
  double nu = 1.0;

  double slow_speed() const;  // sqrt(mu), shear
  double fast_speed() const;  // sqrt(lambda + 2 mu), pressure
  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

MaterialParams make_material(double lambda, double mu, double nu);

struct CharacteristicRoots {
  Complex sigma_plus;
  Complex sigma_minus;
  Complex discriminant;  // principal sqrt(nu^2 r^4 - 4 beta^2 r^2)
};

// Roots of sigma^2 + nu r^2 sigma + beta^2 r^2 = 0.
CharacteristicRoots characteristic_roots(const MaterialParams& params, double beta, double r);

struct KernelValues {
  double K0 = 1.0;
  double K1 = 0.0;
  double dtK0 = 0.0;
  double dtK1 = 1.0;
};

// Fundamental solutions of w'' + nu r^2 w' + beta^2 r^2 w = 0 with (w, w') = (1, 0)
// for K0 and (0, 1) for K1, evaluated without branching on the root regime.
KernelValues kernel_multipliers(const MaterialParams& params, double beta, double r, double t);

// Same evaluation, keeping the (rounding-level) imaginary parts.
struct ComplexKernelValues {
  Complex K0, K1, dtK0, dtK1;
};
ComplexKernelValues kernel_multipliers_complex(const MaterialParams& params, double beta, double r, double t);

struct DiffusionValues {
  double G0 = 1.0;
  double G1 = 0.0;
};

// e^{-nu r^2 t/2} cos(beta r t) and e^{-nu r^2 t/2} sin(beta r t)/(beta r).
DiffusionValues diffusion_multipliers(const MaterialParams& params, double beta, double r, double t);

struct WaveValues {
  double W0 = 1.0;
  double W1 = 0.0;
};

// cos(beta r t) and sin(beta r t)/(beta r).
WaveValues wave_multipliers(double beta, double r, double t);

// sin(x)/x with the removable point filled.
double sinc(double x);

enum class ProjectionPart { parallel, orthogonal };

// P = xi xi^T / |xi|^2 per mode (P := 0 at xi = 0). Result is spectral.
VectorField helmholtz_project(const VectorField& f, ProjectionPart part);

// Multiplies each mode by xi_a xi_b / |xi|^2 (0 at xi = 0); axes are 0-based.
VectorField riesz_apply(const VectorField& f, int a, int b);

enum class Band { low, middle, high, all };

const char* to_string(Band band);
Band band_from_string(const std::string& name);

// Smooth partition chi_L + chi_M + chi_H = 1 on r = |xi|:
// chi_L = 1 on r <= c0/2, 0 on r >= c0; chi_H = 0 on r <= c1, 1 on r >= 2 c1.
struct BandCutoffs {
  double c0 = 1.0;
  double c1 = 4.0;

  void validate() const;
  // c0 sits below both oscillatory thresholds 2 beta/nu, c1 beyond both.
  static BandCutoffs for_material(const MaterialParams& params);
};

BandCutoffs make_cutoffs(double c0, double c1);

// C-infinity step: 0 for s <= 0, 1 for s >= 1, built from e^{-1/s}.
double smooth_step(double s);

double band_cutoff(const BandCutoffs& cuts, Band band, double r);

}  // namespace ewave
