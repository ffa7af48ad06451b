#include "ewave/lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <new>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ewave/errors.hpp"
#include "ewave/log.hpp"

namespace ewave {

namespace detail {

void* aligned_alloc_bytes(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (!p) throw std::bad_alloc();
  return p;
}

void aligned_free_bytes(void* p) noexcept { fftw_free(p); }

// ---------------------------------------------------------------------------
// Plan cache. FFTW's planner is not thread safe, so creation and destruction
// happen under one mutex; execution through fftw_execute_dft is reentrant.
// ---------------------------------------------------------------------------

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlans {
 public:
  explicit FftPlans(int n) {
    const std::size_t count = static_cast<std::size_t>(n) * n * n;
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
    if (!scratch) throw std::bad_alloc();
    // ESTIMATE keeps plan choice, and hence rounding, identical from run to run.
    forward_ = fftw_plan_dft_3d(n, n, n, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_3d(n, n, n, scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(scratch);
    if (!forward_ || !backward_) throw Error("FFTW plan creation failed for n=" + std::to_string(n));
  }
  ~FftPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(Complex* p) const {
    auto* q = reinterpret_cast<fftw_complex*>(p);
    fftw_execute_dft(forward_, q, q);
  }
  void backward(Complex* p) const {
    auto* q = reinterpret_cast<fftw_complex*>(p);
    fftw_execute_dft(backward_, q, q);
  }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

std::shared_ptr<const FftPlans> plans_for(int n) {
  static std::map<int, std::weak_ptr<const FftPlans>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto& slot = cache[n];
  if (auto existing = slot.lock()) return existing;
  auto fresh = std::make_shared<const FftPlans>(n);
  slot = fresh;
  return fresh;
}

}  // namespace detail

const char* to_string(Representation rep) {
  return rep == Representation::physical ? "physical" : "spectral";
}

// ---------------------------------------------------------------------------
// FrequencyLattice
// ---------------------------------------------------------------------------

FrequencyLattice::FrequencyLattice(int n, double box_length) : n_(n), box_length_(box_length) {
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("lattice: n must be even and >= 8, got " + std::to_string(n));
  }
  if (n > 1024) throw std::invalid_argument("lattice: n above 1024 is not supported");
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw std::invalid_argument("lattice: box_length must be positive and finite");
  }
  size_ = static_cast<std::size_t>(n) * n * n;
  axis_xi_.resize(n);
  const double dxi = frequency_step();
  for (int m = 0; m < n; ++m) axis_xi_[m] = dxi * wavenumber(m);
  plans_ = detail::plans_for(n);
}

FrequencyLattice make_lattice(int n, double box_length) { return FrequencyLattice(n, box_length); }

double FrequencyLattice::cell_volume() const noexcept {
  const double h = spacing();
  return h * h * h;
}

double FrequencyLattice::frequency_step() const noexcept {
  return 2.0 * std::numbers::pi / box_length_;
}

double FrequencyLattice::max_frequency() const noexcept {
  return std::numbers::pi * n_ / box_length_;
}

std::array<int, 3> FrequencyLattice::coords(std::size_t idx) const noexcept {
  const auto n = static_cast<std::size_t>(n_);
  return {static_cast<int>(idx % n), static_cast<int>((idx / n) % n), static_cast<int>(idx / (n * n))};
}

std::array<int, 3> FrequencyLattice::wavevector(std::size_t idx) const noexcept {
  const auto m = coords(idx);
  return {wavenumber(m[0]), wavenumber(m[1]), wavenumber(m[2])};
}

std::array<double, 3> FrequencyLattice::frequency(std::size_t idx) const noexcept {
  const auto m = coords(idx);
  return {axis_xi_[m[0]], axis_xi_[m[1]], axis_xi_[m[2]]};
}

int FrequencyLattice::wavenumber_norm2(std::size_t idx) const noexcept {
  const auto k = wavevector(idx);
  return k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
}

double FrequencyLattice::frequency_norm(std::size_t idx) const noexcept {
  return frequency_step() * std::sqrt(static_cast<double>(wavenumber_norm2(idx)));
}

bool FrequencyLattice::on_nyquist(std::size_t idx, int axis) const noexcept {
  return coords(idx)[axis] == n_ / 2;
}

bool FrequencyLattice::on_nyquist(std::size_t idx) const noexcept {
  const auto m = coords(idx);
  return m[0] == n_ / 2 || m[1] == n_ / 2 || m[2] == n_ / 2;
}

std::size_t FrequencyLattice::mirror(std::size_t idx) const noexcept {
  const auto m = coords(idx);
  auto flip = [this](int v) { return v == 0 ? 0 : n_ - v; };
  return index(flip(m[0]), flip(m[1]), flip(m[2]));
}

std::array<double, 3> FrequencyLattice::position(std::size_t idx) const noexcept {
  const auto m = coords(idx);
  const double h = spacing();
  const double x0 = -0.5 * box_length_;
  return {x0 + m[0] * h, x0 + m[1] * h, x0 + m[2] * h};
}

namespace {

// data[idx] *= scale * (-1)^(i+j+k): the phase of a box centred on the origin.
void checkerboard_scale(std::span<Complex> data, int n, double scale) {
  std::size_t idx = 0;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      double s = ((j + k) & 1) ? -scale : scale;
      for (int i = 0; i < n; ++i, ++idx) {
        data[idx] *= s;
        s = -s;
      }
    }
  }
}

}  // namespace

void FrequencyLattice::forward(std::span<Complex> data) const {
  if (data.size() != size_) throw LatticeMismatch("forward transform: buffer size mismatch");
  plans_->forward(data.data());
  const double scale = cell_volume() / std::pow(2.0 * std::numbers::pi, 1.5);
  checkerboard_scale(data, n_, scale);
}

void FrequencyLattice::inverse(std::span<Complex> data) const {
  if (data.size() != size_) throw LatticeMismatch("inverse transform: buffer size mismatch");
  const double scale = std::pow(2.0 * std::numbers::pi, 1.5) / volume();
  checkerboard_scale(data, n_, scale);
  plans_->backward(data.data());
}

// ---------------------------------------------------------------------------
// VectorField
// ---------------------------------------------------------------------------

VectorField::VectorField(const FrequencyLattice& lattice, Representation rep)
    : lattice_(lattice), rep_(rep), data_(3 * lattice.size(), Complex(0.0, 0.0)) {}

void VectorField::fill_zero() noexcept { std::fill(data_.begin(), data_.end(), Complex(0.0, 0.0)); }

void require_same_lattice(const VectorField& a, const VectorField& b, const char* where) {
  if (!(a.lattice() == b.lattice())) {
    throw LatticeMismatch(std::string(where) + ": fields live on different lattices");
  }
}

namespace {
void require_same_layout(const VectorField& a, const VectorField& b, const char* where) {
  require_same_lattice(a, b, where);
  if (a.representation() != b.representation()) {
    throw RepresentationError(std::string(where) + ": representation mismatch");
  }
}
}  // namespace

VectorField& VectorField::operator+=(const VectorField& other) {
  require_same_layout(*this, other, "operator+=");
  const auto src = other.data();
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += src[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  require_same_layout(*this, other, "operator-=");
  const auto src = other.data();
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= src[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) noexcept {
  for (auto& v : data_) v *= s;
  return *this;
}

void VectorField::add_scaled(const VectorField& other, double s) {
  require_same_layout(*this, other, "add_scaled");
  const auto src = other.data();
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * src[i];
}

void VectorField::make_spectral() {
  if (rep_ == Representation::spectral) throw RepresentationError("to_spectral: field is already spectral");
  for (int c = 0; c < 3; ++c) lattice_.forward(component(c));
  rep_ = Representation::spectral;
}

void VectorField::make_physical() {
  if (rep_ == Representation::physical) throw RepresentationError("to_physical: field is already physical");
  for (int c = 0; c < 3; ++c) lattice_.inverse(component(c));
  rep_ = Representation::physical;
  const double residue = imaginary_residue(*this);
  if (residue > 1e-10) {
    std::ostringstream msg;
    msg << "physical field has imaginary residue " << residue << " (relative)";
    log_warning(msg.str());
  }
}

VectorField operator+(VectorField a, const VectorField& b) {
  a += b;
  return a;
}

VectorField operator-(VectorField a, const VectorField& b) {
  a -= b;
  return a;
}

VectorField operator*(double s, VectorField a) {
  a *= s;
  return a;
}

VectorField to_spectral(const VectorField& f) {
  VectorField out = f;
  out.make_spectral();
  return out;
}

VectorField to_physical(const VectorField& f) {
  VectorField out = f;
  out.make_physical();
  return out;
}

VectorField as_spectral(const VectorField& f) {
  return f.is_spectral() ? f : to_spectral(f);
}

VectorField as_physical(const VectorField& f) {
  return f.is_spectral() ? to_physical(f) : f;
}

VectorField spectral_derivative(const VectorField& f, std::array<int, 3> alpha) {
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("spectral_derivative: negative multi-index");
  }
  VectorField out = as_spectral(f);
  const int order = alpha[0] + alpha[1] + alpha[2];
  if (order == 0) return out;

  const auto& lat = out.lattice();
  const int n = lat.n();
  const auto xi = lat.axis_frequencies();
  // Per-axis factor (i xi)^alpha_a, with the Nyquist entry zeroed for odd alpha_a.
  std::array<std::vector<Complex>, 3> axis_factor;
  for (int a = 0; a < 3; ++a) {
    axis_factor[a].resize(n);
    for (int m = 0; m < n; ++m) {
      Complex v = std::pow(Complex(0.0, xi[m]), alpha[a]);
      if (alpha[a] == 0) v = 1.0;
      if (m == n / 2 && alpha[a] % 2 == 1) v = 0.0;
      axis_factor[a][m] = v;
    }
  }
  for (int c = 0; c < 3; ++c) {
    auto comp = out.component(c);
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        const Complex fjk = axis_factor[1][j] * axis_factor[2][k];
        for (int i = 0; i < n; ++i, ++idx) comp[idx] *= axis_factor[0][i] * fjk;
      }
    }
  }
  return out;
}

double imaginary_residue(const VectorField& f) {
  double max_re = 0.0;
  double max_im = 0.0;
  for (const auto& v : f.data()) {
    max_re = std::max(max_re, std::abs(v.real()));
    max_im = std::max(max_im, std::abs(v.imag()));
  }
  if (max_re == 0.0) return max_im == 0.0 ? 0.0 : INFINITY;
  return max_im / max_re;
}

double hermitian_defect(const VectorField& f) {
  if (!f.is_spectral()) throw RepresentationError("hermitian_defect: field must be spectral");
  const auto& lat = f.lattice();
  double scale = 0.0;
  double defect = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto comp = f.component(c);
    for (std::size_t idx = 0; idx < lat.size(); ++idx) {
      scale = std::max(scale, std::abs(comp[idx]));
      defect = std::max(defect, std::abs(comp[lat.mirror(idx)] - std::conj(comp[idx])));
    }
  }
  return scale == 0.0 ? 0.0 : defect / scale;
}

}  // namespace ewave
