#pragma once

#include <vector>

#include "ewave/lattice.hpp"
#include "ewave/symbols.hpp"

namespace ewave {

// Linear solution operator on a lattice, optionally restricted to one band.
struct LinearFlow {
  MaterialParams params;
  FrequencyLattice lattice;
  Band band = Band::all;
  BandCutoffs cuts;

  LinearFlow(const MaterialParams& p, const FrequencyLattice& lat, Band b = Band::all);
  LinearFlow(const MaterialParams& p, const FrequencyLattice& lat, Band b, const BandCutoffs& c);
};

// (u, u_t) pair; both members share one lattice and one representation.
struct FieldPair {
  VectorField u;
  VectorField ut;
};

// Radial tables of the mode propagator E(t) for both wave speeds, indexed by
// the integer |k|^2; band weights are folded in. Applying it splits each mode
// into its parallel (fast speed) and orthogonal (slow speed) parts.
class KernelTable {
 public:
  KernelTable(const LinearFlow& flow, double t);

  double time() const noexcept { return t_; }

  // out = E(t) applied to (u, ut); inputs and outputs are spectral.
  void evolve(const VectorField& u, const VectorField& ut, FieldPair& out) const;
  // acc.u += w * K1-split(f), acc.ut += w * dtK1-split(f).
  void accumulate_forcing(const VectorField& f, double w, FieldPair& acc) const;

 private:
  struct Entry {
    double K0, K1, dtK0, dtK1;
  };
  FrequencyLattice lattice_;
  double t_;
  std::vector<Entry> slow_;
  std::vector<Entry> fast_;
};

// u = K0-split f0 + K1-split f1 and ut from the dtK multipliers. Results are spectral.
FieldPair linear_evolve(const LinearFlow& flow, const VectorField& f0, const VectorField& f1, double t);

// Exact restart: linear_evolve with (state.u, state.ut) as data for time h.
FieldPair linear_step(const LinearFlow& flow, const FieldPair& state, double h);

}  // namespace ewave
