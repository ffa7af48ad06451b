#include "ewave/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "ewave/errors.hpp"

namespace ewave {

LinearFlow::LinearFlow(const MaterialParams& p, const FrequencyLattice& lat, Band b)
    : LinearFlow(p, lat, b, BandCutoffs::for_material(p)) {}

LinearFlow::LinearFlow(const MaterialParams& p, const FrequencyLattice& lat, Band b, const BandCutoffs& c)
    : params(p), lattice(lat), band(b), cuts(c) {
  params.validate();
  cuts.validate();
}

namespace {

// Visits every mode with its centred integer wavevector.
template <class Fn>
void for_each_mode(const FrequencyLattice& lat, Fn&& fn) {
  const int n = lat.n();
  std::size_t idx = 0;
  for (int mk = 0; mk < n; ++mk) {
    const int kz = lat.wavenumber(mk);
    for (int mj = 0; mj < n; ++mj) {
      const int ky = lat.wavenumber(mj);
      for (int mi = 0; mi < n; ++mi, ++idx) fn(idx, lat.wavenumber(mi), ky, kz);
    }
  }
}

void ensure_spectral_pair(FieldPair& p, const FrequencyLattice& lat) {
  if (!(p.u.lattice() == lat) || !p.u.is_spectral()) p.u = VectorField(lat, Representation::spectral);
  if (!(p.ut.lattice() == lat) || !p.ut.is_spectral()) p.ut = VectorField(lat, Representation::spectral);
}

void require_spectral(const VectorField& f, const FrequencyLattice& lat, const char* where) {
  if (!(f.lattice() == lat)) throw LatticeMismatch(std::string(where) + ": field lattice differs from the flow lattice");
  if (!f.is_spectral()) throw RepresentationError(std::string(where) + ": field must be spectral");
}

}  // namespace

KernelTable::KernelTable(const LinearFlow& flow, double t) : lattice_(flow.lattice), t_(t) {
  if (!(t >= 0.0)) throw std::invalid_argument("KernelTable: t must be >= 0");
  const int max_k2 = lattice_.max_wavenumber_norm2();
  slow_.resize(max_k2 + 1);
  fast_.resize(max_k2 + 1);
  const double dxi = lattice_.frequency_step();
  const double slow = flow.params.slow_speed();
  const double fast = flow.params.fast_speed();
  for (int k2 = 0; k2 <= max_k2; ++k2) {
    const double r = dxi * std::sqrt(static_cast<double>(k2));
    const double w = band_cutoff(flow.cuts, flow.band, r);
    const auto ks = kernel_multipliers(flow.params, slow, r, t);
    const auto kf = kernel_multipliers(flow.params, fast, r, t);
    slow_[k2] = {w * ks.K0, w * ks.K1, w * ks.dtK0, w * ks.dtK1};
    fast_[k2] = {w * kf.K0, w * kf.K1, w * kf.dtK0, w * kf.dtK1};
  }
}

void KernelTable::evolve(const VectorField& u, const VectorField& ut, FieldPair& out) const {
  require_spectral(u, lattice_, "evolve");
  require_spectral(ut, lattice_, "evolve");
  ensure_spectral_pair(out, lattice_);
  const Complex* U[3] = {u.component(0).data(), u.component(1).data(), u.component(2).data()};
  const Complex* V[3] = {ut.component(0).data(), ut.component(1).data(), ut.component(2).data()};
  Complex* OU[3] = {out.u.component(0).data(), out.u.component(1).data(), out.u.component(2).data()};
  Complex* OV[3] = {out.ut.component(0).data(), out.ut.component(1).data(), out.ut.component(2).data()};
  const int n = lattice_.n();

  for_each_mode(lattice_, [&](std::size_t idx, int kx, int ky, int kz) {
    const int k2 = kx * kx + ky * ky + kz * kz;
    const Entry& s = slow_[k2];
    const Entry& f = fast_[k2];
    const auto dir = symbol_direction(n, kx, ky, kz);
    const int d2 = dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2];
    const Complex u0 = U[0][idx], u1 = U[1][idx], u2 = U[2][idx];
    const Complex v0 = V[0][idx], v1 = V[1][idx], v2 = V[2][idx];
    Complex pu = 0.0, pv = 0.0;
    if (d2 != 0) {
      const double inv = 1.0 / d2;
      const double x = dir[0], y = dir[1], z = dir[2];
      pu = (x * u0 + y * u1 + z * u2) * inv;
      pv = (x * v0 + y * v1 + z * v2) * inv;
    }
    const double dK0 = f.K0 - s.K0, dK1 = f.K1 - s.K1;
    const double ddK0 = f.dtK0 - s.dtK0, ddK1 = f.dtK1 - s.dtK1;
    const Complex par_u = dK0 * pu + dK1 * pv;
    const Complex par_v = ddK0 * pu + ddK1 * pv;
    const double k[3] = {static_cast<double>(dir[0]), static_cast<double>(dir[1]), static_cast<double>(dir[2])};
    const Complex uu[3] = {u0, u1, u2};
    const Complex vv[3] = {v0, v1, v2};
    for (int c = 0; c < 3; ++c) {
      OU[c][idx] = s.K0 * uu[c] + s.K1 * vv[c] + k[c] * par_u;
      OV[c][idx] = s.dtK0 * uu[c] + s.dtK1 * vv[c] + k[c] * par_v;
    }
  });
}

void KernelTable::accumulate_forcing(const VectorField& force, double w, FieldPair& acc) const {
  require_spectral(force, lattice_, "accumulate_forcing");
  require_spectral(acc.u, lattice_, "accumulate_forcing");
  require_spectral(acc.ut, lattice_, "accumulate_forcing");
  const Complex* F[3] = {force.component(0).data(), force.component(1).data(), force.component(2).data()};
  Complex* OU[3] = {acc.u.component(0).data(), acc.u.component(1).data(), acc.u.component(2).data()};
  Complex* OV[3] = {acc.ut.component(0).data(), acc.ut.component(1).data(), acc.ut.component(2).data()};
  const int n = lattice_.n();

  for_each_mode(lattice_, [&](std::size_t idx, int kx, int ky, int kz) {
    const int k2 = kx * kx + ky * ky + kz * kz;
    const Entry& s = slow_[k2];
    const Entry& f = fast_[k2];
    const Complex g[3] = {F[0][idx], F[1][idx], F[2][idx]};
    const auto dir = symbol_direction(n, kx, ky, kz);
    const int d2 = dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2];
    Complex pg = 0.0;
    if (d2 != 0) {
      const double x = dir[0], y = dir[1], z = dir[2];
      pg = (x * g[0] + y * g[1] + z * g[2]) / static_cast<double>(d2);
    }
    const Complex par_u = (f.K1 - s.K1) * pg;
    const Complex par_v = (f.dtK1 - s.dtK1) * pg;
    const double k[3] = {static_cast<double>(dir[0]), static_cast<double>(dir[1]), static_cast<double>(dir[2])};
    for (int c = 0; c < 3; ++c) {
      OU[c][idx] += w * (s.K1 * g[c] + k[c] * par_u);
      OV[c][idx] += w * (s.dtK1 * g[c] + k[c] * par_v);
    }
  });
}

FieldPair linear_evolve(const LinearFlow& flow, const VectorField& f0, const VectorField& f1, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("linear_evolve: t must be >= 0");
  require_same_lattice(f0, f1, "linear_evolve");
  if (!(f0.lattice() == flow.lattice)) throw LatticeMismatch("linear_evolve: data lattice differs from the flow lattice");
  const VectorField a = as_spectral(f0);
  const VectorField b = as_spectral(f1);
  KernelTable table(flow, t);
  FieldPair out{VectorField(flow.lattice, Representation::spectral), VectorField(flow.lattice, Representation::spectral)};
  table.evolve(a, b, out);
  return out;
}

FieldPair linear_step(const LinearFlow& flow, const FieldPair& state, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("linear_step: h must be > 0");
  return linear_evolve(flow, state.u, state.ut, h);
}

}  // namespace ewave
