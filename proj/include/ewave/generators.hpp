#pragma once

#include <cstdint>

#include "ewave/config.hpp"
#include "ewave/lattice.hpp"

namespace ewave {

// Physical initial data for one DataSpec; the seed only matters for broadband.
VectorField generate_field(const DataSpec& spec, const FrequencyLattice& lattice, double epsilon,
                           std::uint64_t seed);

// Gaussian amplitude * exp(-|x - center|^2 / (2 width^2)) times the mask vector.
VectorField gaussian_field(const FrequencyLattice& lattice, double width, double amplitude,
                           std::array<double, 3> mask = {1.0, 1.0, 1.0}, std::array<double, 3> center = {0, 0, 0});

}  // namespace ewave
