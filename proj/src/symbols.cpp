#include "ewave/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ewave {

// ---------------------------------------------------------------------------
// Material
// ---------------------------------------------------------------------------

double MaterialParams::slow_speed() const { return std::sqrt(mu); }
double MaterialParams::fast_speed() const { return std::sqrt(lambda + 2.0 * mu); }

void MaterialParams::validate() const {
  if (!std::isfinite(lambda) || !std::isfinite(mu) || !std::isfinite(nu)) {
    throw std::invalid_argument("material: parameters must be finite");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("material: requires mu > 0");
  if (!(lambda + 2.0 * mu > 0.0)) throw std::invalid_argument("material: requires lambda + 2 mu > 0");
  if (!(nu > 0.0)) throw std::invalid_argument("material: requires nu > 0");
}

MaterialParams make_material(double lambda, double mu, double nu) {
  MaterialParams p{lambda, mu, nu};
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Roots and kernels
// ---------------------------------------------------------------------------

namespace {

// d = sqrt(nu^2 r^4 - 4 beta^2 r^2), with the radicand factored so that it
// stays accurate next to the double root r = 2 beta / nu.
Complex discriminant(double nu, double beta, double r) {
  const double q = (nu * r - 2.0 * beta) * (nu * r + 2.0 * beta);
  const double root = r * std::sqrt(std::abs(q));
  return q >= 0.0 ? Complex(root, 0.0) : Complex(0.0, root);
}

Complex expm1_complex(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

void check_scalar_args(double beta, double r, double t) {
  if (!(beta > 0.0)) throw std::invalid_argument("symbols: wave speed must be positive");
  if (!(r >= 0.0)) throw std::invalid_argument("symbols: r must be >= 0");
  if (!(t >= 0.0)) throw std::invalid_argument("symbols: t must be >= 0");
}

}  // namespace

CharacteristicRoots characteristic_roots(const MaterialParams& params, double beta, double r) {
  check_scalar_args(beta, r, 0.0);
  const double b = params.nu * r * r;
  const Complex d = discriminant(params.nu, beta, r);
  CharacteristicRoots out;
  out.discriminant = d;
  // The larger root first, the smaller one from the product: no cancellation.
  out.sigma_minus = 0.5 * (-b - d);
  out.sigma_plus = r == 0.0 ? Complex(0.0, 0.0) : (beta * beta * r * r) / out.sigma_minus;
  return out;
}

ComplexKernelValues kernel_multipliers_complex(const MaterialParams& params, double beta, double r, double t) {
  check_scalar_args(beta, r, t);
  const double nu = params.nu;
  const double r2 = r * r;
  const double a = 0.5 * nu * r2 * t;
  const auto roots = characteristic_roots(params, beta, r);
  const Complex d = roots.discriminant;
  const Complex z = 0.5 * d * t;

  Complex sinhc_damped;  // e^{-a} sinh(z)/z
  Complex cosh_damped;   // e^{-a} cosh(z)
  if (std::abs(z) < 1e-4) {
    const double z2 = 0.25 * r2 * (nu * r - 2.0 * beta) * (nu * r + 2.0 * beta) * t * t;
    const double ea = std::exp(-a);
    sinhc_damped = ea * (1.0 + z2 / 6.0 + z2 * z2 / 120.0);
    cosh_damped = ea * (1.0 + z2 / 2.0 + z2 * z2 / 24.0);
  } else {
    // e^{-a +/- z} rewritten around e^{sigma_+ t}, which never overflows.
    const Complex lead = std::exp(roots.sigma_plus * t);
    const Complex dt = d * t;
    sinhc_damped = lead * (-expm1_complex(-dt)) / dt;
    cosh_damped = 0.5 * lead * (1.0 + std::exp(-dt));
  }

  ComplexKernelValues k;
  k.K1 = t * sinhc_damped;
  k.K0 = cosh_damped + a * sinhc_damped;
  k.dtK0 = -beta * beta * r2 * k.K1;
  k.dtK1 = k.K0 - nu * r2 * k.K1;
  return k;
}

KernelValues kernel_multipliers(const MaterialParams& params, double beta, double r, double t) {
  const auto k = kernel_multipliers_complex(params, beta, r, t);
  return {k.K0.real(), k.K1.real(), k.dtK0.real(), k.dtK1.real()};
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

DiffusionValues diffusion_multipliers(const MaterialParams& params, double beta, double r, double t) {
  check_scalar_args(beta, r, t);
  const double damp = std::exp(-0.5 * params.nu * r * r * t);
  const double phase = beta * r * t;
  return {damp * std::cos(phase), damp * t * sinc(phase)};
}

WaveValues wave_multipliers(double beta, double r, double t) {
  check_scalar_args(beta, r, t);
  const double phase = beta * r * t;
  return {std::cos(phase), t * sinc(phase)};
}

// ---------------------------------------------------------------------------
// Projector and Riesz factors
// ---------------------------------------------------------------------------

VectorField helmholtz_project(const VectorField& f, ProjectionPart part) {
  VectorField out = as_spectral(f);
  const auto& lat = out.lattice();
  auto c0 = out.component(0);
  auto c1 = out.component(1);
  auto c2 = out.component(2);
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    const auto kv = lat.wavevector(idx);
    const auto k = symbol_direction(lat.n(), kv[0], kv[1], kv[2]);
    const int k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    Complex p[3] = {0.0, 0.0, 0.0};
    if (k2 != 0) {
      const double kx = k[0], ky = k[1], kz = k[2];
      const Complex dot = (kx * c0[idx] + ky * c1[idx] + kz * c2[idx]) / static_cast<double>(k2);
      for (int a = 0; a < 3; ++a) p[a] = static_cast<double>(k[a]) * dot;
    }
    if (part == ProjectionPart::parallel) {
      c0[idx] = p[0];
      c1[idx] = p[1];
      c2[idx] = p[2];
    } else {
      c0[idx] -= p[0];
      c1[idx] -= p[1];
      c2[idx] -= p[2];
    }
  }
  return out;
}

VectorField riesz_apply(const VectorField& f, int a, int b) {
  if (a < 0 || a > 2 || b < 0 || b > 2) throw std::invalid_argument("riesz_apply: axes must be 0, 1 or 2");
  VectorField out = as_spectral(f);
  const auto& lat = out.lattice();
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    const auto kv = lat.wavevector(idx);
    const auto k = symbol_direction(lat.n(), kv[0], kv[1], kv[2]);
    const int k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const double m = k2 == 0 ? 0.0 : static_cast<double>(k[a]) * k[b] / k2;
    for (int c = 0; c < 3; ++c) out.at(c, idx) *= m;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Band cutoffs
// ---------------------------------------------------------------------------

const char* to_string(Band band) {
  switch (band) {
    case Band::low: return "L";
    case Band::middle: return "M";
    case Band::high: return "H";
    case Band::all: return "all";
  }
  return "";
}

Band band_from_string(const std::string& name) {
  if (name == "L" || name == "low") return Band::low;
  if (name == "M" || name == "middle") return Band::middle;
  if (name == "H" || name == "high") return Band::high;
  if (name == "all" || name.empty()) return Band::all;
  throw std::invalid_argument("unknown band '" + name + "' (expected L, M, H or all)");
}

void BandCutoffs::validate() const {
  if (!(c0 > 0.0) || !(c1 > c0) || !std::isfinite(c1)) {
    std::ostringstream msg;
    msg << "band cutoffs: need 0 < c0 < c1, got c0=" << c0 << " c1=" << c1;
    throw std::invalid_argument(msg.str());
  }
}

BandCutoffs BandCutoffs::for_material(const MaterialParams& params) {
  const double lo = std::min(params.slow_speed(), params.fast_speed());
  const double hi = std::max(params.slow_speed(), params.fast_speed());
  return {lo / params.nu, 4.0 * hi / params.nu};
}

BandCutoffs make_cutoffs(double c0, double c1) {
  BandCutoffs cuts{c0, c1};
  cuts.validate();
  return cuts;
}

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double band_cutoff(const BandCutoffs& cuts, Band band, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("band_cutoff: r must be >= 0");
  const double half = 0.5 * cuts.c0;
  const double low = 1.0 - smooth_step((r - half) / half);
  const double high = smooth_step((r - cuts.c1) / cuts.c1);
  switch (band) {
    case Band::low: return low;
    case Band::high: return high;
    case Band::middle: return 1.0 - low - high;
    case Band::all: return 1.0;
  }
  return 1.0;
}

}  // namespace ewave
