#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "ewave/claims.hpp"
#include "ewave/errors.hpp"
#include "ewave/metrology.hpp"
#include "ewave/norms.hpp"
#include "ewave/propagator.hpp"

using namespace ewave;
using std::numbers::pi;

namespace {

std::vector<Sample> power_law(double c, double e, std::initializer_list<double> ts) {
  std::vector<Sample> s;
  for (double t : ts) s.push_back({t, c * std::pow(t, e)});
  return s;
}

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

double max_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST_CASE("lp norm examples") {
  const auto lat = make_lattice(16, 4.0);
  const double V = lat.volume();
  const auto c = sample_field(lat, [](double, double, double) { return std::array<double, 3>{-2.0, -2.0, -2.0}; });
  CHECK(lp_norm(c, 1.0) == doctest::Approx(std::sqrt(3.0) * 2.0 * V));
  CHECK(lp_norm(c, 2.0) == doctest::Approx(std::sqrt(12.0 * V)));
  CHECK(lp_norm(c, INFINITY) == doctest::Approx(std::sqrt(12.0)));
  CHECK(lp_norm(c, 3.0) == doctest::Approx(std::sqrt(12.0) * std::cbrt(V)));

  VectorField spike(lat, Representation::physical);
  spike.at(1, lat.index(3, 4, 5)) = 5.0;
  const double cv = lat.cell_volume();
  for (double p : {1.0, 1.5, 2.0, 4.0}) CHECK(lp_norm(spike, p) == doctest::Approx(5.0 * std::pow(cv, 1.0 / p)));
  CHECK(lp_norm(spike, INFINITY) == 5.0);

  const auto big = make_lattice(48, 16.0);
  const auto g = sample_field(big, [](double x, double y, double z) {
    return std::array<double, 3>{std::exp(-(x * x + y * y + z * z)), 0.0, 0.0};
  });
  CHECK(lp_norm(g, 2.0) == doctest::Approx(std::pow(pi / 2, 0.75)).epsilon(1e-10));
  CHECK(lp_norm(g, 1.0) == doctest::Approx(std::pow(pi, 1.5)).epsilon(1e-10));
  // Spectral input gives the same value.
  CHECK(lp_norm(to_spectral(g), 2.0) == doctest::Approx(lp_norm(g, 2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(lp_norm(g, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lp_norm(g, std::nan("")), std::invalid_argument);
}

TEST_CASE("lp norms are log-convex in 1/p") {
  const auto lat = make_lattice(8, 3.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  VectorField f(lat, Representation::physical);
  for (auto& v : f.data()) v = n(rng);
  for (double p0 : {1.0, 2.0}) {
    for (double p1 : {3.0, 6.0, double(INFINITY)}) {
      for (double th : {0.25, 0.5, 0.75}) {
        const double inv = (1 - th) / p0 + th / p1;
        const double lhs = lp_norm(f, 1.0 / inv);
        const double rhs = std::pow(lp_norm(f, p0), 1 - th) * std::pow(lp_norm(f, p1), th);
        CHECK(lhs <= rhs * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("derivative norms") {
  const auto lat = make_lattice(16, 2 * pi);
  const auto u = sample_field(lat, [](double x, double, double) { return std::array<double, 3>{std::sin(x), 0.0, 0.0}; });
  const double half = std::pow(2 * pi, 3) / 2;
  CHECK(derivative_norm(u, 0, 2.0) == doctest::Approx(std::sqrt(half)));
  CHECK(derivative_norm(u, 1, 2.0) == doctest::Approx(std::sqrt(half)));
  CHECK(derivative_norm(u, 2, INFINITY) == doctest::Approx(1.0));
  const auto v = sample_field(lat, [](double x, double y, double) { return std::array<double, 3>{0.0, std::sin(x + y), 0.0}; });
  // grad^2 has four equal entries of size |sin|.
  CHECK(derivative_norm(v, 2, INFINITY) == doctest::Approx(2.0).epsilon(1e-12));
  const auto shifted = sample_field(lat, [](double x, double, double) { return std::array<double, 3>{3.0 + std::sin(x), 0.0, 0.0}; });
  CHECK(derivative_norm(shifted, 0, 2.0, true) == doctest::Approx(std::sqrt(half)));
  CHECK(multi_indices(2).size() == 6);
  int total = 0;
  for (const auto& m : multi_indices(3)) total += m.multiplicity;
  CHECK(total == 27);
}

TEST_CASE("exponent registry examples") {
  CHECK(theoretical_exponent("u_decay", 2.0, 1.0, 0) == doctest::Approx(-0.75));
  CHECK(theoretical_exponent("grad_u_l1_growth", 1.0, 1.0, 0) == doctest::Approx(0.5));
  CHECK(theoretical_exponent("u_decay", INFINITY, 0.0, 0) == doctest::Approx(-1.5));
  CHECK(theoretical_exponent("ut_decay", 2.0, 0.0, 1) == doctest::Approx(-0.75));
  CHECK(theoretical_exponent("utt_smoothing", 2.0, 0.0, 2) == doctest::Approx(-1.25));
  CHECK(theoretical_exponent("nonlinearity_decay", 1.0, 0.0, 0) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(theoretical_exponent("u_decay", 2.0, 0.0, 0), std::out_of_range);
  CHECK_THROWS_AS(theoretical_exponent("u_decay", 1.0, 2.0, 0), std::out_of_range);
  CHECK_THROWS_AS(theoretical_exponent("utt_lp", 1.0, 0.0, 2), std::out_of_range);
  CHECK_THROWS_AS(theoretical_exponent("nonlinearity_decay", 1.5, 0.0, 0), std::out_of_range);
  CHECK_THROWS_AS(find_claim("no_such_claim"), std::invalid_argument);
  CHECK(claim_covers(find_claim("ut_decay"), 2.0, 2.0, 1));
  CHECK_FALSE(claim_covers(find_claim("ut_decay"), 3.0, 2.0, 1));
  CHECK(comparison_from_string("upper") == Comparison::upper_bound);
}

TEST_CASE("both forms of the decay exponents agree") {
  const std::pair<const char*, const char*> pairs[] = {
      {"u_decay", "u_decay_lp"}, {"ut_decay", "ut_decay_lp"}, {"grad2_ut_smoothing", "grad2_ut_lp"}, {"utt_smoothing", "utt_lp"}};
  for (const auto& [a, b] : pairs) {
    const auto& ca = find_claim(a);
    const auto& cb = find_claim(b);
    for (double p : {1.01, 1.5, 2.0, 3.0, 6.0, 100.0}) {
      for (double alpha = 0.0; alpha <= 3.0; alpha += 0.25) {
        const int ell = cb.fixed_ell < 0 ? 0 : cb.fixed_ell;
        if (!claim_covers(ca, p, alpha, ell) || !claim_covers(cb, p, alpha, ell)) continue;
        CHECK(std::abs(theoretical_exponent(ca, p, alpha, ell) - theoretical_exponent(cb, p, alpha, ell)) <= 1e-14);
      }
    }
  }
}

TEST_CASE("rate fits") {
  const auto exact = fit_rate(power_law(2.0, -0.75, {1, 2, 4, 8, 16}));
  CHECK(exact.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(std::exp(exact.intercept) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exact.residual <= 1e-12);
  CHECK(exact.count == 5);
  CHECK(fit_rate(power_law(3.0, 0.5, {1, 3, 10, 30, 100})).slope == doctest::Approx(0.5).epsilon(1e-12));

  std::vector<Sample> wobble;
  for (double t = 1; t <= 100; t *= 1.2) wobble.push_back({t, std::pow(t, -1.5) * (1 + 0.05 * std::sin(t))});
  CHECK(std::abs(fit_rate(wobble).slope + 1.5) <= 0.05);

  // Scaling values or time leaves the slope unchanged.
  auto scaled = wobble;
  for (auto& s : scaled) s.value *= 1e-7;
  CHECK(fit_rate(scaled).slope == doctest::Approx(fit_rate(wobble).slope).epsilon(1e-12));

  const auto win = fit_rate(power_law(1.0, -1.0, {1, 2, 3, 4, 5, 6, 7, 8}), 3.0, 6.0);
  CHECK(win.count == 4);
  CHECK(win.t_lo == 3.0);
  CHECK_THROWS_AS(fit_rate(power_law(1.0, -1.0, {1, 2, 3})), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate({{1, 1}, {2, 0}, {3, 1}, {4, 1}}), std::invalid_argument);

  const std::vector<double> xs{0, 1, 2, 3}, ys{1, 3, 5, 7};
  const auto af = fit_affine(xs, ys);
  CHECK(af.slope == doctest::Approx(2.0));
  CHECK(af.intercept == doctest::Approx(1.0));
  CHECK(af.r2 == doctest::Approx(1.0));
  const std::vector<double> noisy{1, 3.5, 4.5, 7};
  CHECK(fit_affine(xs, noisy).r2 < 1.0);
}

TEST_CASE("verdicts") {
  VerifyOptions o;
  o.t_min = 1.0;
  const auto& two = find_claim("u_decay");
  const double e = theoretical_exponent(two, 2.0, 1.0, 0);
  // Default t_min = 5 leaves three samples.
  CHECK_THROWS_AS(make_report(two, 2.0, 1.0, 0, power_law(1.0, e + 0.1, {2, 4, 8, 16, 20})), InsufficientHorizon);
  CHECK(make_report(two, 2.0, 1.0, 0, power_law(1.0, e + 0.1, {2, 4, 8, 16, 20}), o).pass);
  CHECK_FALSE(make_report(two, 2.0, 1.0, 0, power_law(1.0, e - 0.2, {2, 4, 8, 16, 20}), o).pass);

  const auto& up = find_claim("nonlinearity_decay");
  const double eu = theoretical_exponent(up, 1.0, 0.0, 0);
  CHECK(make_report(up, 1.0, 0.0, 0, power_law(1.0, eu - 1.0, {2, 4, 8, 16}), o).pass);
  CHECK_FALSE(make_report(up, 1.0, 0.0, 0, power_law(1.0, eu + 0.3, {2, 4, 8, 16}), o).pass);

  const auto& dec = find_claim("u_profile");
  const double ed = theoretical_exponent(dec, 2.0, 1.0, 0);
  CHECK(make_report(dec, 2.0, 1.0, 0, power_law(1.0, ed - 0.01, {2, 4, 8, 16}), o).pass);
  CHECK_FALSE(make_report(dec, 2.0, 1.0, 0, power_law(1.0, ed, {2, 4, 8, 16}), o).pass);
  CHECK(make_report(dec, 2.0, 1.0, 0, {{2, 0}, {4, 0}, {8, 0}, {16, 0}}, o).pass);

  o.horizon = 10.0;
  const auto clipped = make_report(two, 2.0, 1.0, 0, power_law(1.0, e, {2, 3, 5, 8, 16, 20}), o);
  CHECK(clipped.window_hi == 10.0);
  CHECK(clipped.fit_count == 4);
  o.horizon = 4.0;
  CHECK_THROWS_AS(make_report(two, 2.0, 1.0, 0, power_law(1.0, e, {2, 3, 5, 8, 16, 20}), o), InsufficientHorizon);
}

TEST_CASE("report files") {
  VerifyOptions o;
  o.t_min = 1.0;
  const auto& claim = find_claim("u_decay");
  const auto r = make_report(claim, 2.0, 1.0, 0, power_law(1.0, -0.75, {2, 4, 8, 16}), o);
  const auto dir = std::filesystem::temp_directory_path() / "ewave_metrology_test";
  std::filesystem::create_directories(dir);
  write_report_csv(dir / "r.csv", r);
  write_summary_csv(dir / "s.csv", {r});
  CHECK(first_line(dir / "r.csv") == "t,value,envelope,ratio");
  CHECK(first_line(dir / "s.csv") == "claim,p,alpha,ell,fitted,theoretical,tolerance,verdict");
  CHECK(summary_csv({r}).find("u_decay,2,1,0,") != std::string::npos);
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(0.1) == "0.1");
  std::filesystem::remove_all(dir);
}

TEST_CASE("time derivatives of a linear solution") {
  const auto lat = make_lattice(16, 12.0);
  const MaterialParams p{1.0, 1.0, 0.5};
  const LinearFlow flow(p, lat);
  const auto f0 = sample_field(lat, [](double x, double y, double z) {
    const double g = std::exp(-(x * x + y * y + z * z) / 4);
    return std::array<double, 3>{g, 0.5 * g, -g};
  });
  const VectorField f1(lat, Representation::physical);
  const double t = 1.0, h = 1e-3;
  auto mid = linear_evolve(flow, f0, f1, t);
  const SolverState s{t, mid.u, mid.ut, 0, {}};
  const auto form = NonlinearityForm::none();
  CHECK(max_diff(time_derivative(p, form, s, 0), mid.u) == 0.0);
  CHECK(max_diff(time_derivative(p, form, s, 1), mid.ut) == 0.0);
  VectorField fd = linear_evolve(flow, f0, f1, t + h).ut - linear_evolve(flow, f0, f1, t - h).ut;
  fd *= 1.0 / (2 * h);
  CHECK(max_diff(time_derivative(p, form, s, 2), fd) <= 1e-5);
  CHECK_THROWS(time_derivative(p, form, s, 3));
}
