#include "ewave/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "ewave/errors.hpp"

namespace ewave {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::vector<char>& buf, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <class T>
T take(std::istream& in, const std::filesystem::path& path) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) throw Error("snapshot " + path.string() + ": truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const VectorField& field, const MaterialParams& params,
                    double time) {
  const auto& lat = field.lattice();
  std::vector<char> header;
  header.insert(header.end(), {'E', 'W', 'S', 'P'});
  put<std::uint32_t>(header, kSnapshotVersion);
  put<std::uint32_t>(header, static_cast<std::uint32_t>(lat.n()));
  put<double>(header, lat.box_length());
  put<std::uint8_t>(header, static_cast<std::uint8_t>(field.representation()));
  put<double>(header, params.lambda);
  put<double>(header, params.mu);
  put<double>(header, params.nu);
  put<double>(header, time);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  std::vector<char> chunk;
  chunk.reserve(1 << 20);
  for (const Complex& v : field.data()) {
    put<double>(chunk, v.real());
    put<double>(chunk, v.imag());
    if (chunk.size() >= (1 << 20)) {
      out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
      chunk.clear();
    }
  }
  out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  if (!out) throw Error("write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "EWSP", 4) != 0) {
    throw Error("snapshot " + path.string() + ": bad magic");
  }
  const auto version = take<std::uint32_t>(in, path);
  if (version != kSnapshotVersion) {
    throw Error("snapshot " + path.string() + ": unsupported version " + std::to_string(version));
  }
  const auto n = take<std::uint32_t>(in, path);
  const auto box = take<double>(in, path);
  const auto rep = take<std::uint8_t>(in, path);
  if (rep > 1) throw Error("snapshot " + path.string() + ": bad representation tag");
  MaterialParams params;
  params.lambda = take<double>(in, path);
  params.mu = take<double>(in, path);
  params.nu = take<double>(in, path);
  const double time = take<double>(in, path);

  FrequencyLattice lat(static_cast<int>(n), box);
  VectorField field(lat, static_cast<Representation>(rep));
  for (Complex& v : field.data()) {
    const double re = take<double>(in, path);
    const double im = take<double>(in, path);
    v = Complex(re, im);
  }
  return {std::move(field), params, time};
}

}  // namespace ewave
