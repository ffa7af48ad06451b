#include "ewave/oracle/mode_ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ewave::oracle {
namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

// Radau IIA, three stages, order 5.
struct RadauTableau {
  double a[3][3];
  double c[3];
  RadauTableau() {
    const double s6 = std::sqrt(6.0);
    const double rows[3][3] = {
        {(88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0, (-2.0 + 3.0 * s6) / 225.0},
        {(296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0},
        {(16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a[i][j] = rows[i][j];
    c[0] = (4.0 - s6) / 10.0;
    c[1] = (4.0 + s6) / 10.0;
    c[2] = 1.0;
  }
};

const RadauTableau& tableau() {
  static const RadauTableau tab;
  return tab;
}

// One Radau step for Y' = J Y on both columns of Y at once.
// Stage system: Z_i - h sum_j a_ij J Z_j = h c_i J Y.
Mat2 radau_step(const Mat2& J, const Mat2& Y, double h) {
  const auto& tab = tableau();
  double M[6][6] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          M[2 * i + p][2 * j + q] = (i == j && p == q ? 1.0 : 0.0) - h * tab.a[i][j] * J[p][q];

  // Right-hand sides, one per column of Y.
  double B[6][2];
  for (int i = 0; i < 3; ++i)
    for (int p = 0; p < 2; ++p)
      for (int col = 0; col < 2; ++col)
        B[2 * i + p][col] = h * tab.c[i] * (J[p][0] * Y[0][col] + J[p][1] * Y[1][col]);

  // Gaussian elimination with partial pivoting.
  for (int k = 0; k < 6; ++k) {
    int piv = k;
    for (int i = k + 1; i < 6; ++i)
      if (std::abs(M[i][k]) > std::abs(M[piv][k])) piv = i;
    if (piv != k) {
      for (int j = 0; j < 6; ++j) std::swap(M[k][j], M[piv][j]);
      std::swap(B[k][0], B[piv][0]);
      std::swap(B[k][1], B[piv][1]);
    }
    for (int i = k + 1; i < 6; ++i) {
      const double f = M[i][k] / M[k][k];
      if (f == 0.0) continue;
      for (int j = k; j < 6; ++j) M[i][j] -= f * M[k][j];
      B[i][0] -= f * B[k][0];
      B[i][1] -= f * B[k][1];
    }
  }
  for (int k = 5; k >= 0; --k) {
    for (int col = 0; col < 2; ++col) {
      double s = B[k][col];
      for (int j = k + 1; j < 6; ++j) s -= M[k][j] * B[j][col];
      B[k][col] = s / M[k][k];
    }
  }
  // Stiffly accurate: the last stage is the new value.
  Mat2 out = Y;
  for (int p = 0; p < 2; ++p)
    for (int col = 0; col < 2; ++col) out[p][col] += B[4 + p][col];
  return out;
}

double frob(const Mat2& m) {
  return std::sqrt(m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1]);
}

}  // namespace

ModeOdeResult integrate_mode(double nu, double beta, double r, double t, const ModeOdeOptions& opts) {
  if (!(nu > 0.0) || !(beta > 0.0) || !(r >= 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("integrate_mode: need nu > 0, beta > 0, r >= 0, t >= 0");
  }
  const double r2 = r * r;
  const Mat2 J = {{{0.0, 1.0}, {-beta * beta * r2, -nu * r2}}};
  ModeOdeResult res;
  Mat2 Y = {{{1.0, 0.0}, {0.0, 1.0}}};
  if (t == 0.0) {
    res.phi = Y;
    return res;
  }

  const double stiffness = nu * r2 + beta * r + 1.0;
  double h = opts.initial_step > 0.0 ? opts.initial_step : 0.01 / stiffness;
  double now = 0.0;
  // The system is linear, so Y is kept at unit size and the scale tracked as a log.
  double log_scale = 0.0;
  constexpr double kOrderExponent = 1.0 / 6.0;
  while (now < t) {
    if (res.steps + res.rejected >= opts.max_steps) {
      throw std::runtime_error("integrate_mode: step budget exhausted");
    }
    const bool last = now + h >= t;
    const double step = last ? t - now : h;
    const Mat2 full = radau_step(J, Y, step);
    const Mat2 half = radau_step(J, radau_step(J, Y, 0.5 * step), 0.5 * step);
    Mat2 diff;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) diff[p][q] = half[p][q] - full[p][q];
    const double scale = std::max(frob(half), 1e-300);
    // Step doubling on an order-5 method: the half-step error is diff / 31.
    const double err = frob(diff) / 31.0 / scale;
    if (err <= opts.rtol || step < 1e-14 * std::max(1.0, t)) {
      // Richardson-extrapolated value is order 6.
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) Y[p][q] = half[p][q] + diff[p][q] / 31.0;
      now = last ? t : now + step;
      ++res.steps;
      const double size = frob(Y);
      if (size > 0.0) {
        for (auto& row : Y)
          for (double& v : row) v /= size;
        log_scale += std::log(size);
      }
    } else {
      ++res.rejected;
    }
    const double factor = err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(opts.rtol / err, kOrderExponent), 0.2, 4.0);
    h = step * factor;
  }
  const double restore = std::exp(log_scale);
  for (auto& row : Y)
    for (double& v : row) v *= restore;
  res.phi = Y;
  return res;
}

}  // namespace ewave::oracle
