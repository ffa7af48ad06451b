#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "ewave/errors.hpp"
#include "ewave/lattice.hpp"
#include "ewave/log.hpp"
#include "ewave/snapshot.hpp"
#include "ewave/symbols.hpp"

using namespace ewave;
using std::numbers::pi;

namespace {

VectorField random_real_field(const FrequencyLattice& lat, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField f(lat, Representation::physical);
  for (auto& v : f.data()) v = u(rng);
  return f;
}

double max_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_abs(const VectorField& a) {
  double m = 0.0;
  for (const auto& v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("make_lattice axis frequencies") {
  const auto lat = make_lattice(8, 2 * pi);
  std::set<double> xs;
  for (std::size_t idx = 0; idx < lat.size(); ++idx) xs.insert(lat.frequency(idx)[0]);
  std::set<double> expect;
  for (int k = -4; k <= 3; ++k) expect.insert(k);
  REQUIRE(xs.size() == expect.size());
  auto it = expect.begin();
  for (double x : xs) CHECK(x == doctest::Approx(*it++).epsilon(1e-15));

  CHECK(make_lattice(8, pi).frequency_step() == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_lattice(7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(8, -1.0), std::invalid_argument);
}

TEST_CASE("lattice invariants: antisymmetry, one zero mode, mode count") {
  const auto lat = make_lattice(16, 3.0);
  CHECK(lat.size() == 16u * 16u * 16u);
  int zeros = 0;
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    if (lat.frequency_norm(idx) == 0.0) ++zeros;
    if (lat.on_nyquist(idx)) continue;
    const auto a = lat.frequency(idx);
    const auto b = lat.frequency(lat.mirror(idx));
    for (int c = 0; c < 3; ++c) CHECK(a[c] == -b[c]);
  }
  CHECK(zeros == 1);
}

TEST_CASE("transform normalization: constant field and single mode") {
  const auto lat = make_lattice(16, 5.0);
  VectorField g = sample_field(lat, [](double, double, double) { return std::array<double, 3>{2.0, 0.0, -1.0}; });
  const VectorField gh = to_spectral(g);
  const double scale = std::pow(2 * pi, -1.5) * lat.volume();
  CHECK(std::abs(gh.at(0, 0) - Complex(2.0 * scale, 0.0)) < 1e-12 * scale);
  CHECK(std::abs(gh.at(2, 0) - Complex(-scale, 0.0)) < 1e-12 * scale);
  double rest = 0.0;
  for (std::size_t idx = 1; idx < lat.size(); ++idx) rest = std::max(rest, std::abs(gh.at(0, idx)));
  CHECK(rest < 1e-12 * scale);

  const double xi0 = 3 * lat.frequency_step();
  VectorField c = sample_field(lat, [&](double x, double, double) {
    return std::array<double, 3>{std::cos(xi0 * x), 0.0, 0.0};
  });
  const VectorField ch = to_spectral(c);
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    const auto k = lat.wavevector(idx);
    const bool at_pm = std::abs(k[0]) == 3 && k[1] == 0 && k[2] == 0;
    if (!at_pm) CHECK(std::abs(ch.at(0, idx)) < 1e-12);
    else CHECK(std::abs(ch.at(0, idx)) > 1.0);
  }
}

TEST_CASE("Gaussian zero mode matches the continuum transform") {
  const auto lat = make_lattice(64, 40.0);
  VectorField g = sample_field(lat, [](double x, double y, double z) {
    return std::array<double, 3>{std::exp(-(x * x + y * y + z * z)), 0.0, 0.0};
  });
  const VectorField gh = to_spectral(g);
  const double expect = std::pow(2.0, -1.5);
  CHECK(std::abs(gh.at(0, 0).real() - expect) / expect < 1e-6);
}

TEST_CASE("representation errors and round trip") {
  const auto lat = make_lattice(16, 7.0);
  const VectorField f = random_real_field(lat, 3);
  CHECK_THROWS_AS(to_physical(f), RepresentationError);
  const VectorField fh = to_spectral(f);
  CHECK_THROWS_AS(to_spectral(fh), RepresentationError);
  const VectorField back = to_physical(fh);
  CHECK(max_diff(back, f) / max_abs(f) <= 1e-12);
  CHECK(hermitian_defect(fh) <= 1e-12);
  CHECK(imaginary_residue(back) <= 1e-12);
}

TEST_CASE("Parseval under the continuum normalization") {
  const auto lat = make_lattice(16, 7.0);
  const VectorField f = random_real_field(lat, 11);
  const VectorField fh = to_spectral(f);
  double phys = 0.0, spec = 0.0;
  for (const auto& v : f.data()) phys += std::norm(v);
  for (const auto& v : fh.data()) spec += std::norm(v);
  phys *= lat.cell_volume();
  spec *= std::pow(lat.frequency_step(), 3);
  CHECK(std::abs(phys - spec) / phys < 1e-12);
}

TEST_CASE("spectral_derivative on lattice modes") {
  const auto lat = make_lattice(16, 2 * pi);
  VectorField s = sample_field(lat, [](double x, double, double) { return std::array<double, 3>{std::sin(x), 0.0, 0.0}; });
  const VectorField id = to_physical(spectral_derivative(s, {0, 0, 0}));
  CHECK(max_diff(id, s) < 1e-12);
  const VectorField d = to_physical(spectral_derivative(s, {1, 0, 0}));
  VectorField c = sample_field(lat, [](double x, double, double) { return std::array<double, 3>{std::cos(x), 0.0, 0.0}; });
  CHECK(max_diff(d, c) <= 1e-12);
}

TEST_CASE("second derivative agrees with finite differences at second order") {
  const int n = 64;
  const double L = 16.0;
  const auto lat = make_lattice(n, L);
  auto gauss = [](double x, double y, double z) {
    return std::array<double, 3>{std::exp(-(x * x + y * y + z * z) / 2.0), 0.0, 0.0};
  };
  const VectorField g = sample_field(lat, gauss);
  const VectorField d2 = to_physical(spectral_derivative(g, {2, 0, 0}));
  const double h = lat.spacing();
  double err_h = 0.0, err_2h = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        auto at = [&](int di) { return g.at(0, lat.index((i + di + n) % n, j, k)).real(); };
        const double exact = d2.at(0, lat.index(i, j, k)).real();
        const double fd1 = (at(1) - 2 * at(0) + at(-1)) / (h * h);
        const double fd2 = (at(2) - 2 * at(0) + at(-2)) / (4 * h * h);
        err_h = std::max(err_h, std::abs(fd1 - exact));
        err_2h = std::max(err_2h, std::abs(fd2 - exact));
      }
    }
  }
  // Richardson: doubling the stencil width quadruples the error.
  CHECK(err_2h / err_h == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("odd derivatives zero the Nyquist row") {
  const auto lat = make_lattice(8, 2 * pi);
  VectorField f(lat, Representation::spectral);
  for (auto& v : f.data()) v = 1.0;
  const VectorField d = spectral_derivative(f, {1, 0, 0});
  const VectorField dd = spectral_derivative(f, {2, 0, 0});
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    if (lat.on_nyquist(idx, 0)) {
      CHECK(d.at(0, idx) == Complex(0.0));
      CHECK(dd.at(0, idx) != Complex(0.0));
    }
  }
}

TEST_CASE("differentiation commutes with the projector") {
  const auto lat = make_lattice(16, 9.0);
  const VectorField f = to_spectral(random_real_field(lat, 5));
  for (std::array<int, 3> alpha : {std::array<int, 3>{1, 0, 0}, {0, 2, 1}, {1, 1, 1}}) {
    const VectorField a = spectral_derivative(helmholtz_project(f, ProjectionPart::parallel), alpha);
    const VectorField b = helmholtz_project(spectral_derivative(f, alpha), ProjectionPart::parallel);
    CHECK(max_diff(a, b) <= 1e-12 * std::max(1.0, max_abs(a)));
  }
}

TEST_CASE("field arithmetic and lattice mismatch") {
  const auto a = make_lattice(8, 1.0);
  const auto b = make_lattice(8, 2.0);
  VectorField f(a, Representation::physical), g(b, Representation::physical);
  CHECK_THROWS_AS(f += g, LatticeMismatch);
  VectorField h(a, Representation::spectral);
  CHECK_THROWS_AS(f += h, RepresentationError);
  f.at(1, 3) = 2.0;
  const VectorField s = 3.0 * f + f - f;
  CHECK(s.at(1, 3) == Complex(6.0));
}

TEST_CASE("imaginary watchdog warns on non-real physical data") {
  const auto lat = make_lattice(8, 1.0);
  VectorField f(lat, Representation::spectral);
  f.at(0, 1) = Complex(1.0, 0.0);  // no mirror partner, so not Hermitian
  std::vector<std::string> warnings;
  set_log_sink([&](LogLevel level, const std::string& msg) {
    if (level == LogLevel::warning) warnings.push_back(msg);
  });
  f.make_physical();
  set_log_sink(nullptr);
  CHECK(!warnings.empty());
}

TEST_CASE("snapshot round trip and header checks") {
  const auto lat = make_lattice(8, 3.5);
  const VectorField f = to_spectral(random_real_field(lat, 9));
  const MaterialParams p{0.5, 1.25, 2.0};
  const auto path = std::filesystem::temp_directory_path() / "ewave_test_snapshot.ewsp";
  write_snapshot(path, f, p, 4.25);
  const Snapshot s = read_snapshot(path);
  CHECK(s.time == 4.25);
  CHECK(s.params.lambda == 0.5);
  CHECK(s.params.mu == 1.25);
  CHECK(s.params.nu == 2.0);
  CHECK(s.field.lattice() == lat);
  CHECK(s.field.is_spectral());
  CHECK(max_diff(s.field, f) == 0.0);
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 4 + 8 + 1 + 24 + 8 + 3 * 512 * 16);

  {
    std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
    io.write("XXXX", 4);
  }
  CHECK_THROWS(read_snapshot(path));
  std::filesystem::remove(path);
}
