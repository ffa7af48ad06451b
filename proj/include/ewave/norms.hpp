#pragma once

#include <array>
#include <span>
#include <vector>

#include "ewave/lattice.hpp"

namespace ewave {

// (sum cellvol |f(x)|^p)^{1/p} with |.| the Euclidean magnitude of the 3-vector;
// p = infinity gives the max. Spectral input is transformed first.
// Throws std::invalid_argument for p < 1 or NaN.
double lp_norm(const VectorField& f, double p);

// Same norm on precomputed pointwise magnitudes.
double lp_norm_of_magnitude(std::span<const double> magnitude, double cell_volume, double p);

// Multi-indices of one order with their multinomial multiplicities.
struct MultiIndex {
  std::array<int, 3> alpha;
  int multiplicity;
};
std::vector<MultiIndex> multi_indices(int order);

// Pointwise magnitude of the full derivative tensor grad^order f, i.e.
// sqrt(sum over ordered index tuples and components of |d f_c|^2).
std::vector<double> derivative_magnitude(const VectorField& f, int order, bool remove_mean = false);

// L^p norm of derivative_magnitude. With remove_mean the zero mode is dropped first.
double derivative_norm(const VectorField& f, int order, double p, bool remove_mean = false);

// Spectral copy with the zero mode cleared.
VectorField without_mean(const VectorField& f);

}  // namespace ewave
