#include "ewave/generators.hpp"

#include <cmath>
#include <random>

#include "ewave/errors.hpp"
#include "ewave/snapshot.hpp"

namespace ewave {

namespace {

// Uniform in [-1, 1) from the raw engine output; std distributions are not
// specified bit-for-bit across library implementations.
double symmetric_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

VectorField broadband_field(const DataSpec& d, const FrequencyLattice& lat, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  VectorField f(lat, Representation::spectral);
  for (std::size_t idx = 1; idx < lat.size(); ++idx) {
    const auto k = lat.wavevector(idx);
    if (std::abs(k[0]) > d.kmax || std::abs(k[1]) > d.kmax || std::abs(k[2]) > d.kmax) continue;
    const std::size_t mirror = lat.mirror(idx);
    if (mirror < idx) continue;
    for (int c = 0; c < 3; ++c) {
      const double re = symmetric_unit(rng);
      const double im = mirror == idx ? 0.0 : symmetric_unit(rng);
      f.at(c, idx) = d.mask[c] * Complex(re, im);
      f.at(c, mirror) = std::conj(f.at(c, idx));
    }
  }
  f.make_physical();
  double peak = 0.0;
  for (auto& v : f.data()) {
    v = v.real();
    peak = std::max(peak, std::abs(v.real()));
  }
  if (peak > 0.0) f *= scale / peak;
  return f;
}

}  // namespace

VectorField gaussian_field(const FrequencyLattice& lattice, double width, double amplitude,
                           std::array<double, 3> mask, std::array<double, 3> center) {
  const double inv = 1.0 / (2.0 * width * width);
  return sample_field(lattice, [&](double x, double y, double z) {
    const double dx = x - center[0], dy = y - center[1], dz = z - center[2];
    const double g = amplitude * std::exp(-(dx * dx + dy * dy + dz * dz) * inv);
    return std::array<double, 3>{g * mask[0], g * mask[1], g * mask[2]};
  });
}

VectorField generate_field(const DataSpec& d, const FrequencyLattice& lat, double epsilon, std::uint64_t seed) {
  const double scale = epsilon * d.amplitude;
  if (d.kind == "zero") return VectorField(lat, Representation::physical);
  if (d.kind == "gaussian") return gaussian_field(lat, d.width, scale, d.mask, d.center);
  if (d.kind == "mode") {
    const double step = lat.frequency_step();
    const double kx = step * d.k[0], ky = step * d.k[1], kz = step * d.k[2];
    return sample_field(lat, [&](double x, double y, double z) {
      const double c = scale * std::cos(kx * x + ky * y + kz * z);
      return std::array<double, 3>{c * d.polarization[0], c * d.polarization[1], c * d.polarization[2]};
    });
  }
  if (d.kind == "broadband") return broadband_field(d, lat, scale, seed);
  if (d.kind == "file") {
    Snapshot s = read_snapshot(d.path);
    if (!(s.field.lattice() == lat)) throw LatticeMismatch("data file " + d.path + " was written on a different lattice");
    VectorField f = as_physical(s.field);
    f *= d.amplitude;
    return f;
  }
  throw ConfigError("unknown data kind '" + d.kind + "'");
}

}  // namespace ewave
