#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ewave/errors.hpp"
#include "ewave/lattice.hpp"
#include "ewave/oracle/mode_ode.hpp"
#include "ewave/propagator.hpp"

using namespace ewave;
using std::numbers::pi;

namespace {

double max_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_abs(const VectorField& a) {
  double m = 0.0;
  for (auto v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

VectorField random_physical(const FrequencyLattice& lat, unsigned seed, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  VectorField f(lat, Representation::physical);
  for (auto& v : f.data()) v = u(rng);
  return f;
}

}  // namespace

TEST_CASE("t = 0 returns the data") {
  const auto lat = make_lattice(16, 10.0);
  const MaterialParams p{1.0, 1.0, 0.5};
  const LinearFlow flow(p, lat);
  const auto f0 = random_physical(lat, 1), f1 = random_physical(lat, 2);
  const auto out = linear_evolve(flow, f0, f1, 0.0);
  CHECK(max_diff(out.u, to_spectral(f0)) <= 1e-15);
  CHECK(max_diff(out.ut, to_spectral(f1)) <= 1e-15);
  CHECK_THROWS_AS(linear_evolve(flow, f0, f1, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(linear_step(flow, FieldPair{f0, f1}, 0.0), std::invalid_argument);
  const auto other = make_lattice(8, 10.0);
  CHECK_THROWS_AS(linear_evolve(flow, VectorField(other, Representation::physical),
                                VectorField(other, Representation::physical), 1.0),
                  LatticeMismatch);
}

TEST_CASE("single modes follow the per-mode ODE at the right speed") {
  const double L = 2 * pi;
  const auto lat = make_lattice(8, L);
  const MaterialParams p{1.0, 1.0, 0.7};
  const LinearFlow flow(p, lat);
  const double r = std::sqrt(5.0);
  const double t = 1.3;
  // Longitudinal mode: polarization along k = (2, 1, 0); transverse along z.
  const auto par = sample_field(lat, [](double x, double y, double) {
    const double c = std::cos(2 * x + y);
    return std::array<double, 3>{2 * c, c, 0.0};
  });
  const auto orth = sample_field(lat, [](double x, double y, double) {
    return std::array<double, 3>{0.0, 0.0, std::cos(2 * x + y)};
  });
  const VectorField zero(lat, Representation::physical);
  for (int which = 0; which < 2; ++which) {
    const VectorField& f = which == 0 ? par : orth;
    const double beta = which == 0 ? p.fast_speed() : p.slow_speed();
    const auto o = oracle::integrate_mode(p.nu, beta, r, t);
    const auto a = to_physical(linear_evolve(flow, f, zero, t).u);
    const auto b = to_physical(linear_evolve(flow, zero, f, t).u);
    const auto bt = to_physical(linear_evolve(flow, zero, f, t).ut);
    double ea = 0.0, eb = 0.0, et = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
      const double fv = f.data()[i].real();
      ea = std::max(ea, std::abs(a.data()[i].real() - o.phi[0][0] * fv));
      eb = std::max(eb, std::abs(b.data()[i].real() - o.phi[0][1] * fv));
      et = std::max(et, std::abs(bt.data()[i].real() - o.phi[1][1] * fv));
    }
    CHECK(ea <= 1e-10);
    CHECK(eb <= 1e-10);
    CHECK(et <= 1e-10);
  }
}

TEST_CASE("semigroup on fields") {
  const auto lat = make_lattice(16, 12.0);
  const MaterialParams p{0.5, 1.0, 0.3};
  const LinearFlow flow(p, lat);
  const auto f0 = random_physical(lat, 3), f1 = random_physical(lat, 4);
  const auto whole = linear_evolve(flow, f0, f1, 2.5);
  const auto half = linear_evolve(flow, f0, f1, 1.0);
  const auto rest = linear_step(flow, half, 1.5);
  CHECK(max_diff(whole.u, rest.u) <= 1e-12 * std::max(1.0, max_abs(whole.u)));
  CHECK(max_diff(whole.ut, rest.ut) <= 1e-12 * std::max(1.0, max_abs(whole.ut)));
}

TEST_CASE("bands add up to the full flow") {
  const auto lat = make_lattice(16, 8.0);
  const MaterialParams p{1.0, 1.0, 1.0};
  const auto f0 = random_physical(lat, 5), f1 = random_physical(lat, 6);
  const auto all = linear_evolve(LinearFlow(p, lat, Band::all), f0, f1, 0.7);
  auto sum = linear_evolve(LinearFlow(p, lat, Band::low), f0, f1, 0.7);
  for (Band b : {Band::middle, Band::high}) {
    const auto part = linear_evolve(LinearFlow(p, lat, b), f0, f1, 0.7);
    sum.u += part.u;
    sum.ut += part.ut;
  }
  CHECK(max_diff(all.u, sum.u) <= 1e-13);
  CHECK(max_diff(all.ut, sum.ut) <= 1e-13);
}

TEST_CASE("time derivative matches a centred difference") {
  const auto lat = make_lattice(16, 10.0);
  const MaterialParams p{0.2, 0.8, 0.4};
  const LinearFlow flow(p, lat);
  const auto f0 = random_physical(lat, 7), f1 = random_physical(lat, 8);
  const double t = 0.9;
  const auto mid = linear_evolve(flow, f0, f1, t);
  std::vector<double> errs;
  for (double h : {1e-2, 5e-3}) {
    const auto up = linear_evolve(flow, f0, f1, t + h);
    const auto dn = linear_evolve(flow, f0, f1, t - h);
    VectorField fd = up.u - dn.u;
    fd *= 1.0 / (2 * h);
    errs.push_back(max_diff(fd, mid.ut));
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("small step limit") {
  const auto lat = make_lattice(8, 6.0);
  const MaterialParams p{0.0, 1.0, 0.5};
  const LinearFlow flow(p, lat);
  const auto f0 = random_physical(lat, 9), f1 = random_physical(lat, 10);
  const double h = 1e-7;
  const auto out = linear_step(flow, FieldPair{to_spectral(f0), to_spectral(f1)}, h);
  VectorField du = out.u - to_spectral(f0);
  du *= 1.0 / h;
  CHECK(max_diff(du, to_spectral(f1)) <= 1e-4);
}

TEST_CASE("real data stays real") {
  const auto lat = make_lattice(16, 9.0);
  const MaterialParams p{1.0, 1.0, 0.2};
  const LinearFlow flow(p, lat);
  const auto out = linear_evolve(flow, random_physical(lat, 11), random_physical(lat, 12), 3.0);
  CHECK(hermitian_defect(out.u) <= 1e-13);
  CHECK(hermitian_defect(out.ut) <= 1e-13);
  CHECK(imaginary_residue(to_physical(out.u)) <= 1e-13);
}

TEST_CASE("kernel table rejects mismatched fields") {
  const auto lat = make_lattice(8, 6.0);
  const LinearFlow flow(MaterialParams{0.0, 1.0, 1.0}, lat);
  KernelTable table(flow, 1.0);
  CHECK(table.time() == 1.0);
  FieldPair out{VectorField(lat, Representation::spectral), VectorField(lat, Representation::spectral)};
  const VectorField phys(lat, Representation::physical);
  CHECK_THROWS_AS(table.evolve(phys, phys, out), RepresentationError);
  CHECK_THROWS_AS(KernelTable(flow, -1.0), std::invalid_argument);
}
