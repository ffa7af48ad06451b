#include "ewave/profiles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ewave/claims.hpp"
#include "ewave/errors.hpp"
#include "ewave/metrology.hpp"
#include "ewave/norms.hpp"

namespace ewave {

namespace {

const double kTwoPi32 = std::pow(2.0 * std::numbers::pi, 1.5);

double integral_of(std::span<const Complex> physical, double cell_volume) {
  double s = 0.0;
  for (const Complex& v : physical) s += v.real();
  return cell_volume * s;
}

// xi xi^T / |xi|^2 with the Nyquist-safe direction.
struct Projector {
  double d[3] = {0.0, 0.0, 0.0};
  double inv = 0.0;
  Projector(int n, std::array<int, 3> k) {
    const auto dir = symbol_direction(n, k[0], k[1], k[2]);
    const int d2 = dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2];
    for (int a = 0; a < 3; ++a) d[a] = dir[a];
    inv = d2 == 0 ? 0.0 : 1.0 / d2;
  }
  double operator()(int a, int b) const { return d[a] * d[b] * inv; }
};

double riesz_factor(int n, std::array<int, 3> k, std::optional<std::pair<int, int>> riesz) {
  if (!riesz) return 1.0;
  const auto [a, b] = *riesz;
  if (a < 0 || a > 2 || b < 0 || b > 2) throw std::invalid_argument("riesz pair axes must be 0, 1 or 2");
  return Projector(n, k)(a, b);
}

// Multiplier pair (slow, fast) of one profile term.
struct SpeedPair {
  double slow;
  double fast;
};

}  // namespace

Moments data_moments(const VectorField& f0, const VectorField& f1) {
  require_same_lattice(f0, f1, "data_moments");
  Moments m;
  const double cv = f0.lattice().cell_volume();
  const VectorField g1 = as_physical(f1);
  const VectorField g0 = as_spectral(f0);
  for (int k = 0; k < 3; ++k) m.m1[k] = integral_of(g1.component(k), cv);
  for (int a = 0; a < 3; ++a) {
    std::array<int, 3> alpha{0, 0, 0};
    alpha[a] = 1;
    VectorField d = spectral_derivative(g0, alpha);
    d.make_physical();
    for (int k = 0; k < 3; ++k) m.m0[k][a] = integral_of(d.component(k), cv);
  }
  return m;
}

MomentAccumulator::MomentAccumulator(NonlinearityForm form) : form_(std::move(form)) {}

void MomentAccumulator::add(const SolverState& state) {
  if (form_.is_zero()) {
    add_sample(state.t, {0.0, 0.0, 0.0}, 0.0);
    return;
  }
  const VectorField F = eval_nonlinearity(form_, state);
  // int F_k = (2pi)^{3/2} F_hat_k(0)
  std::array<double, 3> integral{};
  for (int k = 0; k < 3; ++k) integral[k] = kTwoPi32 * F.at(k, 0).real();
  add_sample(state.t, integral, lp_norm(F, 1.0));
}

void MomentAccumulator::add_sample(double t, const std::array<double, 3>& integral, double l1_norm) {
  if (!times_.empty() && !(t > times_.back())) throw std::invalid_argument("MomentAccumulator: times must increase");
  times_.push_back(t);
  integrals_.push_back(integral);
  l1_.push_back(l1_norm);
}

void MomentAccumulator::finish(Moments& m) const {
  m.M = {0.0, 0.0, 0.0};
  m.tail = {0.0, 0.0, 0.0};
  m.tail_bound = 0.0;
  m.tail_slope = 0.0;
  m.t_max = times_.empty() ? 0.0 : times_.back();
  bool all_zero = true;
  for (double v : l1_) all_zero = all_zero && v == 0.0;
  if (form_.is_zero() || all_zero) return;

  if (times_.size() < 2 || times_.front() != 0.0)
    throw InsufficientHorizon("moments: the trajectory must start at t = 0 with at least two samples");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    const double dt = times_[i] - times_[i - 1];
    for (int k = 0; k < 3; ++k) m.M[k] += 0.5 * dt * (integrals_[i][k] + integrals_[i - 1][k]);
  }

  const double T = times_.back();
  std::vector<Sample> tail;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] > 0.0 && times_[i] >= T / 10.0 && l1_[i] > 0.0) tail.push_back({times_[i], l1_[i]});
  }
  if (tail.size() < 4) throw InsufficientHorizon("moments: fewer than 4 samples of |F|_1 in the last decade");
  const RateFit fit = fit_rate(tail);
  m.tail_slope = fit.slope;
  if (fit.slope > -1.5) {
    throw InsufficientHorizon("moments: |F(u)|_1 decays with slope " + format_number(fit.slope) +
                              " > -1.5 over the last decade; extend the horizon");
  }
  const double factor = T / (-fit.slope - 1.0);
  for (int k = 0; k < 3; ++k) {
    m.tail[k] = integrals_.back()[k] * factor;
    m.M[k] += m.tail[k];
  }
  m.tail_bound = std::exp(fit.intercept) * std::pow(T, fit.slope) * factor;
}

Moments compute_moments(const VectorField& f0, const VectorField& f1, const std::vector<SolverState>& trajectory,
                        const NonlinearityForm& form) {
  Moments m = data_moments(f0, f1);
  MomentAccumulator acc(form);
  for (const auto& s : trajectory) acc.add(s);
  acc.finish(m);
  return m;
}

VectorField diffusion_wave_apply(const MaterialParams& params, double beta, int j, double t, const VectorField& g,
                                 std::optional<std::pair<int, int>> riesz, Band band) {
  if (j != 0 && j != 1) throw std::invalid_argument("diffusion wave index must be 0 or 1");
  if (!(t >= 0.0)) throw std::invalid_argument("diffusion wave: t must be >= 0");
  VectorField out = as_spectral(g);
  const auto& lat = out.lattice();
  const BandCutoffs cuts = BandCutoffs::for_material(params);
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    const double r = lat.frequency_norm(idx);
    const auto dv = diffusion_multipliers(params, beta, r, t);
    const double m = (j == 0 ? dv.G0 : dv.G1) * riesz_factor(lat.n(), lat.wavevector(idx), riesz) *
                     band_cutoff(cuts, band, r);
    for (int c = 0; c < 3; ++c) out.at(c, idx) *= m;
  }
  return out;
}

VectorField diffusion_wave_field(const MaterialParams& params, double beta, int j, double t,
                                 const FrequencyLattice& lattice, std::optional<std::pair<int, int>> riesz, Band band,
                                 std::array<double, 3> v) {
  if (!(t > 0.0)) throw std::invalid_argument("diffusion_wave_field: t must be > 0");
  VectorField g(lattice, Representation::spectral);
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    for (int c = 0; c < 3; ++c) g.at(c, idx) = v[c] / kTwoPi32;
  }
  VectorField out = diffusion_wave_apply(params, beta, j, t, g, riesz, band);
  out.make_physical();
  return out;
}

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::G: return "G";
    case ProfileKind::H: return "H";
    case ProfileKind::Gtilde: return "Gtilde";
  }
  return "";
}

VectorField profile_field(ProfileKind kind, const Moments& mo, const MaterialParams& params, double t,
                          const FrequencyLattice& lat) {
  if (!(t > 0.0)) throw std::invalid_argument("profile: t must be > 0");
  params.validate();
  const double bs = params.slow_speed();
  const double bf = params.fast_speed();
  const int n = lat.n();
  const int nyq = -n / 2;
  std::array<double, 3> c{};
  for (int k = 0; k < 3; ++k) c[k] = (mo.m1[k] + mo.M[k]) / kTwoPi32;

  VectorField out(lat, Representation::spectral);
  for (std::size_t idx = 1; idx < lat.size(); ++idx) {
    const auto kv = lat.wavevector(idx);
    const auto xi = lat.frequency(idx);
    const double r = lat.frequency_norm(idx);
    const double r2 = r * r;
    const auto ds = diffusion_multipliers(params, bs, r, t);
    const auto df = diffusion_multipliers(params, bf, r, t);

    // a: multiplier on the m0 term, b: on m1 + M.
    SpeedPair a{}, b{};
    switch (kind) {
      case ProfileKind::G:
        a = {ds.G0, df.G0};
        b = {ds.G1, df.G1};
        break;
      case ProfileKind::H:
        a = {-r2 * bs * bs * ds.G1, -r2 * bf * bf * df.G1};
        b = {ds.G0, df.G0};
        break;
      case ProfileKind::Gtilde:
        a = {-r2 * bs * bs * ds.G0, -r2 * bf * bf * df.G0};
        b = {-r2 * bs * bs * ds.G1, -r2 * bf * bf * df.G1};
        break;
    }

    // Inverse gradient of the m0 data: sum_a (-i xi_a / |xi|^2) m0[k][a].
    Complex w[3];
    for (int k = 0; k < 3; ++k) {
      Complex s = 0.0;
      for (int ax = 0; ax < 3; ++ax) {
        if (kv[ax] == nyq) continue;
        s += Complex(0.0, -xi[ax] / r2) * mo.m0[k][ax];
      }
      w[k] = s / kTwoPi32;
    }

    const Projector P(n, kv);
    for (int row = 0; row < 3; ++row) {
      Complex v = a.slow * w[row] + b.slow * c[row];
      for (int col = 0; col < 3; ++col) {
        const double p = P(row, col);
        if (p == 0.0) continue;
        v += p * ((a.fast - a.slow) * w[col] + (b.fast - b.slow) * c[col]);
      }
      out.at(row, idx) = v;
    }
  }
  return out;
}

VectorField profile_G(const Moments& m, const MaterialParams& params, double t, const FrequencyLattice& lattice) {
  return profile_field(ProfileKind::G, m, params, t, lattice);
}

VectorField profile_H(const Moments& m, const MaterialParams& params, double t, const FrequencyLattice& lattice) {
  return profile_field(ProfileKind::H, m, params, t, lattice);
}

VectorField profile_Gtilde(const Moments& m, const MaterialParams& params, double t, const FrequencyLattice& lattice) {
  return profile_field(ProfileKind::Gtilde, m, params, t, lattice);
}

namespace {

int profile_ell(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::G: return 0;
    case ProfileKind::H: return 1;
    case ProfileKind::Gtilde: return 2;
  }
  return 0;
}

const char* profile_claim(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::G: return "u_profile";
    case ProfileKind::H: return "ut_profile";
    case ProfileKind::Gtilde: return "utt_profile";
  }
  return "";
}

}  // namespace

double profile_gap_value(const MaterialParams& params, const NonlinearityForm& form, const SolverState& state,
                         const Moments& moments, ProfileKind kind, int alpha, double p) {
  VectorField diff = time_derivative(params, form, state, profile_ell(kind));
  diff -= profile_field(kind, moments, params, state.t, state.u_hat.lattice());
  return derivative_norm(diff, alpha, p, true);
}

std::vector<GapSample> profile_gap(const MaterialParams& params, const NonlinearityForm& form,
                                   const std::vector<SolverState>& trajectory, const Moments& moments,
                                   ProfileKind kind, int alpha, double p) {
  const double e = theoretical_exponent(profile_claim(kind), p, alpha, 0);
  std::vector<GapSample> out;
  for (const auto& s : trajectory) {
    if (!(s.t > 0.0)) continue;
    GapSample g;
    g.t = s.t;
    g.gap = profile_gap_value(params, form, s, moments, kind, alpha, p);
    g.envelope = std::pow(s.t, e);
    g.ratio = g.gap / g.envelope;
    out.push_back(g);
  }
  return out;
}

bool ratios_decreasing(const std::vector<double>& ratios) {
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    const bool both_zero = ratios[i] == 0.0 && ratios[i - 1] == 0.0;
    if (!(ratios[i] < ratios[i - 1]) && !both_zero) return false;
  }
  return true;
}

double diffusion_difference_ratio(const MaterialParams& params, double beta, double gamma, double t,
                                  const VectorField& g, int a, int b) {
  if (!(t > 0.0)) throw std::invalid_argument("diffusion_difference_ratio: t must be > 0");
  const std::pair<int, int> ab{a, b};
  VectorField d = diffusion_wave_apply(params, beta, 0, t, g, ab, Band::low);
  d -= diffusion_wave_apply(params, gamma, 0, t, g, ab, Band::low);
  return lp_norm(d, 1.0) / (std::sqrt(t) * lp_norm(g, 1.0));
}

}  // namespace ewave
