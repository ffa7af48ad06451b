#include "ewave/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ewave {

namespace {

void check_p(double p) {
  if (std::isnan(p) || p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
}

int factorial(int k) {
  int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void add_squares(const VectorField& phys, double weight, std::vector<double>& acc) {
  for (int c = 0; c < 3; ++c) {
    const auto comp = phys.component(c);
    for (std::size_t i = 0; i < comp.size(); ++i) acc[i] += weight * std::norm(comp[i]);
  }
}

}  // namespace

double lp_norm_of_magnitude(std::span<const double> magnitude, double cell_volume, double p) {
  check_p(p);
  double peak = 0.0;
  for (double m : magnitude) peak = std::max(peak, m);
  if (std::isinf(p) || peak == 0.0) return peak;
  double sum = 0.0;
  if (p == 1.0) {
    for (double m : magnitude) sum += m;
    return cell_volume * sum;
  }
  if (p == 2.0) {
    for (double m : magnitude) sum += m * m;
    return std::sqrt(cell_volume * sum);
  }
  // Scaled by the peak so large p cannot overflow.
  for (double m : magnitude) sum += std::pow(m / peak, p);
  return peak * std::pow(cell_volume * sum, 1.0 / p);
}

double lp_norm(const VectorField& f, double p) {
  check_p(p);
  const VectorField phys = as_physical(f);
  std::vector<double> mag(phys.lattice().size(), 0.0);
  add_squares(phys, 1.0, mag);
  for (double& m : mag) m = std::sqrt(m);
  return lp_norm_of_magnitude(mag, phys.lattice().cell_volume(), p);
}

std::vector<MultiIndex> multi_indices(int order) {
  if (order < 0) throw std::invalid_argument("multi_indices: order must be >= 0");
  std::vector<MultiIndex> out;
  for (int i = order; i >= 0; --i) {
    for (int j = order - i; j >= 0; --j) {
      const int k = order - i - j;
      out.push_back({{i, j, k}, factorial(order) / (factorial(i) * factorial(j) * factorial(k))});
    }
  }
  return out;
}

VectorField without_mean(const VectorField& f) {
  VectorField g = as_spectral(f);
  for (int c = 0; c < 3; ++c) g.at(c, 0) = 0.0;
  return g;
}

std::vector<double> derivative_magnitude(const VectorField& f, int order, bool remove_mean) {
  const VectorField base = remove_mean ? without_mean(f) : as_spectral(f);
  std::vector<double> acc(base.lattice().size(), 0.0);
  if (order == 0) {
    add_squares(as_physical(base), 1.0, acc);
  } else {
    for (const auto& mi : multi_indices(order)) {
      VectorField d = spectral_derivative(base, mi.alpha);
      d.make_physical();
      add_squares(d, mi.multiplicity, acc);
    }
  }
  for (double& m : acc) m = std::sqrt(m);
  return acc;
}

double derivative_norm(const VectorField& f, int order, double p, bool remove_mean) {
  check_p(p);
  const auto mag = derivative_magnitude(f, order, remove_mean);
  return lp_norm_of_magnitude(mag, f.lattice().cell_volume(), p);
}

}  // namespace ewave
