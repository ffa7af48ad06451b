#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "ewave/lattice.hpp"
#include "ewave/symbols.hpp"

namespace ewave {

// Binary snapshot, little-endian throughout:
//   "EWSP" | u32 version | u32 n | f64 box_length | u8 representation |
//   f64 lambda, mu, nu | f64 time | 3 * n^3 complex (re, im) f64 pairs, x-fastest.
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  VectorField field;
  MaterialParams params;
  double time = 0.0;
};

void write_snapshot(const std::filesystem::path& path, const VectorField& field, const MaterialParams& params,
                    double time);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace ewave
