#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace ewave {

using Complex = std::complex<double>;

// Allocator backed by fftw_malloc so every buffer has SIMD alignment and can be
// handed to the cached plans via the new-array execute interface.
namespace detail {
void* aligned_alloc_bytes(std::size_t bytes);
void aligned_free_bytes(void* p) noexcept;
}  // namespace detail

template <class T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}
  T* allocate(std::size_t count) {
    return static_cast<T*>(detail::aligned_alloc_bytes(count * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) noexcept { detail::aligned_free_bytes(p); }
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;
using RealBuffer = std::vector<double, AlignedAllocator<double>>;

enum class Representation : std::uint8_t { physical = 0, spectral = 1 };

const char* to_string(Representation rep);

namespace detail {
class FftPlans;
}

// Cubic periodic box of side L with n points per axis; grid points sit at
// x_j = -L/2 + j*h so the box is centred on the origin. Storage is x-fastest:
// index = i + n*(j + n*k). Mode m along an axis carries the centred integer
// wavenumber k = m for m < n/2 and m - n otherwise, so k in [-n/2, n/2).
class FrequencyLattice {
 public:
  FrequencyLattice(int n, double box_length);

  int n() const noexcept { return n_; }
  double box_length() const noexcept { return box_length_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return box_length_ / n_; }
  double cell_volume() const noexcept;
  double volume() const noexcept { return box_length_ * box_length_ * box_length_; }
  double frequency_step() const noexcept;
  // Largest per-axis |xi|, i.e. pi*n/L.
  double max_frequency() const noexcept;

  std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n_) * (static_cast<std::size_t>(j) +
                                           static_cast<std::size_t>(n_) * static_cast<std::size_t>(k));
  }
  std::array<int, 3> coords(std::size_t idx) const noexcept;

  int wavenumber(int m) const noexcept { return m < n_ / 2 ? m : m - n_; }
  std::array<int, 3> wavevector(std::size_t idx) const noexcept;
  std::array<double, 3> frequency(std::size_t idx) const noexcept;
  // Per-axis frequency table indexed by FFT index m.
  std::span<const double> axis_frequencies() const noexcept { return axis_xi_; }
  int wavenumber_norm2(std::size_t idx) const noexcept;
  int max_wavenumber_norm2() const noexcept { return 3 * (n_ / 2) * (n_ / 2); }
  double frequency_norm(std::size_t idx) const noexcept;
  bool on_nyquist(std::size_t idx, int axis) const noexcept;
  bool on_nyquist(std::size_t idx) const noexcept;
  // Index of the mode with wavevector -k (Nyquist rows map to themselves).
  std::size_t mirror(std::size_t idx) const noexcept;
  std::array<double, 3> position(std::size_t idx) const noexcept;

  // In-place scaled transforms on one scalar array of size() values.
  // forward: g_hat(xi) = (2pi)^{-3/2} * cellvol * sum_x g(x) e^{-i x.xi}
  // inverse: exact inverse of forward.
  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

  bool operator==(const FrequencyLattice& other) const noexcept {
    return n_ == other.n_ && box_length_ == other.box_length_;
  }

 private:
  int n_;
  double box_length_;
  std::size_t size_;
  std::vector<double> axis_xi_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

FrequencyLattice make_lattice(int n, double box_length);

// Direction for projector-type symbols xi xi^T / |xi|^2. On a Nyquist row the
// sign of that component is ambiguous (k and -k are the same mode), so it is
// dropped to keep the symbol even; modes made only of Nyquist components keep k.
inline std::array<int, 3> symbol_direction(int n, int kx, int ky, int kz) noexcept {
  const int nyq = -n / 2;
  std::array<int, 3> d = {kx == nyq ? 0 : kx, ky == nyq ? 0 : ky, kz == nyq ? 0 : kz};
  if (d[0] == 0 && d[1] == 0 && d[2] == 0) return {kx, ky, kz};
  return d;
}

// Three complex component arrays on a lattice, in one representation.
class VectorField {
 public:
  VectorField(const FrequencyLattice& lattice, Representation rep);

  const FrequencyLattice& lattice() const noexcept { return lattice_; }
  Representation representation() const noexcept { return rep_; }
  bool is_spectral() const noexcept { return rep_ == Representation::spectral; }

  std::span<Complex> component(int c) noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * lattice_.size(), lattice_.size()};
  }
  std::span<const Complex> component(int c) const noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * lattice_.size(), lattice_.size()};
  }
  Complex& at(int c, std::size_t idx) noexcept {
    return data_[static_cast<std::size_t>(c) * lattice_.size() + idx];
  }
  const Complex& at(int c, std::size_t idx) const noexcept {
    return data_[static_cast<std::size_t>(c) * lattice_.size() + idx];
  }
  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  void fill_zero() noexcept;
  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s) noexcept;
  // this += s * other
  void add_scaled(const VectorField& other, double s);

  // Transform in place, flipping the representation.
  void make_spectral();
  void make_physical();

 private:
  FrequencyLattice lattice_;
  Representation rep_;
  ComplexBuffer data_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

void require_same_lattice(const VectorField& a, const VectorField& b, const char* where);

// Strict conversions: the input must be in the opposite representation.
VectorField to_spectral(const VectorField& f);
VectorField to_physical(const VectorField& f);
// Lenient conversions: return a copy in the requested representation.
VectorField as_spectral(const VectorField& f);
VectorField as_physical(const VectorField& f);

// Multiplies each mode by (i xi)^alpha. The Nyquist row of axis a is zeroed when
// alpha[a] is odd. Result is spectral.
VectorField spectral_derivative(const VectorField& f, std::array<int, 3> alpha);

// Max |Im| over max |Re| of a physical field.
double imaginary_residue(const VectorField& f);
// Max |g(-xi) - conj(g(xi))| over max |g| of a spectral field.
double hermitian_defect(const VectorField& f);

// Builds a physical field from a callable fn(x, y, z) -> std::array<double, 3>.
template <class Fn>
VectorField sample_field(const FrequencyLattice& lattice, Fn&& fn) {
  VectorField f(lattice, Representation::physical);
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    const auto x = lattice.position(idx);
    const std::array<double, 3> v = fn(x[0], x[1], x[2]);
    for (int c = 0; c < 3; ++c) f.at(c, idx) = v[c];
  }
  return f;
}

}  // namespace ewave
