#include "ewave/claims.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ewave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ClaimRegion closed_p(double p_lo, double p_hi, double a_lo, double a_hi, int ell = 0) {
  return {p_lo, p_hi, false, false, a_lo, a_hi, ell, ell};
}

ClaimRegion open_p(double p_lo, double p_hi, double a_lo, double a_hi, int ell = 0) {
  return {p_lo, p_hi, true, true, a_lo, a_hi, ell, ell};
}

ClaimRegion half_open_p(double p_lo, double p_hi, double a_lo, double a_hi, int ell = 0) {
  return {p_lo, p_hi, false, true, a_lo, a_hi, ell, ell};
}

std::vector<ClaimEntry> build_registry() {
  std::vector<ClaimEntry> r;
  auto add = [&](std::string id, std::string statement, ClaimTarget target, ExponentFormula e,
                 std::vector<ClaimRegion> regions, Comparison cmp, int fixed_ell) {
    r.push_back({std::move(id), std::move(statement), target, e, std::move(regions), cmp, fixed_ell});
  };

  // Solution estimates, consistency form: -(3/2)(1-1/p) + 1/p - (alpha+ell)/2.
  add("u_decay", "|grad^a u|_p <= C (1+t)^{-(3/2)(1-1/p) + 1/p - a/2}", ClaimTarget::solution,
      {-1.5, 1.0, 0.0, -0.5, 0.0},
      {open_p(1.0, kInf, 1.0, 3.0), closed_p(2.0, 2.0, 1.0, 3.0), closed_p(1.0, 1.0, 1.0, 1.0),
       closed_p(kInf, kInf, 0.0, 1.0)},
      Comparison::two_sided, 0);
  add("ut_decay", "|grad^a u_t|_p <= C (1+t)^{-(3/2)(1-1/p) + 1/p - (a+1)/2}", ClaimTarget::solution,
      {-1.5, 1.0, -0.5, -0.5, 0.0},
      {closed_p(1.0, kInf, 0.0, 1.0, 1), closed_p(2.0, 2.0, 0.0, 2.0, 1)}, Comparison::two_sided, 1);
  add("grad2_ut_smoothing", "|grad^2 u_t|_p <= C (1+t)^{-(3/2)(1-1/p) + 1/p - 1} t^{-1/2}", ClaimTarget::solution,
      {-1.5, 1.0, -0.5, -0.5, 0.0}, {open_p(1.0, kInf, 2.0, 2.0, 1)}, Comparison::two_sided, 1);
  add("utt_smoothing", "|u_tt|_p <= C (1+t)^{-(3/2)(1-1/p) + 1/p - 1/2} t^{-1/2}", ClaimTarget::solution,
      {-1.5, 1.0, -1.0, 0.0, 0.0}, {closed_p(1.0, kInf, 0.0, 0.0, 2)}, Comparison::two_sided, 2);

  // The same families in the L^p form: -(5/2)(1-1/p) + shift - a/2.
  add("u_decay_lp", "|grad^a u|_p <= C (1+t)^{-(5/2)(1-1/p) + 1 - a/2}", ClaimTarget::solution,
      {-2.5, 0.0, 1.0, -0.5, 0.0}, {open_p(1.0, kInf, 1.0, 3.0)}, Comparison::two_sided, 0);
  add("ut_decay_lp", "|grad^a u_t|_p <= C (1+t)^{-(5/2)(1-1/p) + 1/2 - a/2}", ClaimTarget::solution,
      {-2.5, 0.0, 0.5, -0.5, 0.0}, {open_p(1.0, kInf, 0.0, 1.0, 1)}, Comparison::two_sided, 1);
  add("grad2_ut_lp", "|grad^2 u_t|_p <= C (1+t)^{-(5/2)(1-1/p)} t^{-1/2}", ClaimTarget::solution,
      {-2.5, 0.0, 0.5, -0.5, 0.0}, {open_p(1.0, kInf, 2.0, 2.0, 1)}, Comparison::two_sided, 1);
  add("utt_lp", "|u_tt|_p <= C (1+t)^{-(5/2)(1-1/p) + 1/2} t^{-1/2}", ClaimTarget::solution,
      {-2.5, 0.0, 0.0, 0.0, 0.0}, {open_p(1.0, kInf, 0.0, 0.0, 2)}, Comparison::two_sided, 2);

  // Gradient growth in L^1 is a ceiling rather than a rate.
  add("grad_u_l1_growth", "|grad u|_1 <= C (1+t)^{1/2}", ClaimTarget::solution, {-2.5, 0.0, 1.0, -0.5, 0.0},
      {closed_p(1.0, 1.0, 1.0, 1.0)}, Comparison::upper_bound, 0);

  // Profile convergence: the gap is o(t^e), so the ratio gap / t^e must fall.
  add("u_profile", "|grad^a (u - G)|_p = o(t^{-(5/2)(1-1/p) + 1 - a/2})", ClaimTarget::profile_G,
      {-2.5, 0.0, 1.0, -0.5, 0.0},
      {open_p(1.0, kInf, 1.0, 3.0), closed_p(2.0, 2.0, 1.0, 3.0), closed_p(1.0, 1.0, 1.0, 1.0),
       closed_p(kInf, kInf, 0.0, 1.0)},
      Comparison::decreasing, 0);
  add("ut_profile", "|grad^a (u_t - H)|_p = o(t^{-(5/2)(1-1/p) + 1/2 - a/2})", ClaimTarget::profile_H,
      {-2.5, 0.0, 0.5, -0.5, 0.0},
      {open_p(1.0, kInf, 0.0, 2.0), closed_p(2.0, 2.0, 0.0, 2.0), closed_p(1.0, 1.0, 0.0, 1.0),
       closed_p(kInf, kInf, 0.0, 1.0)},
      Comparison::decreasing, 0);
  add("utt_profile", "|u_tt - Gtilde|_p = o(t^{-(5/2)(1-1/p)})", ClaimTarget::profile_Gtilde,
      {-2.5, 0.0, 0.0, 0.0, 0.0}, {closed_p(1.0, kInf, 0.0, 0.0)}, Comparison::decreasing, 0);

  // Low-frequency kernels on L^1 data (q = 1, no derivatives moved onto g).
  ExponentFormula k0{-2.5, 0.0, 0.5, -0.5, -0.5};
  ExponentFormula k1{-2.5, 0.0, 1.0, -0.5, -0.5};
  ClaimRegion any{1.0, kInf, false, false, 0.0, 3.0, 0, 2};
  add("k0_low", "|d_t^l grad^a K0_L g|_p <= C (1+t)^{-(5/2)(1-1/p) + 1/2 - (l+a)/2} |g|_1", ClaimTarget::kernel, k0,
      {any}, Comparison::two_sided, -1);
  add("k1_low", "|d_t^l grad^a K1_L g|_p <= C (1+t)^{-(5/2)(1-1/p) + 1 - (l+a)/2} |g|_1", ClaimTarget::kernel, k1,
      {any}, Comparison::two_sided, -1);
  add("g0_riesz", "|d_t^l grad^a R_a R_b G0 g|_p <= C (1+t)^{-(5/2)(1-1/p) + 1/2 - (l+a)/2} |g|_1",
      ClaimTarget::kernel, k0, {any}, Comparison::two_sided, -1);
  add("g1_riesz", "|d_t^l grad^a R_a R_b G1 g|_p <= C (1+t)^{-(5/2)(1-1/p) + 1 - (l+a)/2} |g|_1",
      ClaimTarget::kernel, k1, {any}, Comparison::two_sided, -1);

  // Nonlinear term: |F|_1 <= C(1+t)^{-2}, |F|_p <= C(1+t)^{-7/2 + 3/(2p)} for 2 <= p <= 6.
  add("nonlinearity_decay", "|F(u)|_p <= C (1+t)^{-7/2 + 3/(2p)}", ClaimTarget::nonlinearity,
      {0.0, 1.5, -3.5, 0.0, 0.0}, {closed_p(1.0, 1.0, 0.0, 0.0), closed_p(2.0, 6.0, 0.0, 0.0)},
      Comparison::upper_bound, 0);
  (void)half_open_p;
  return r;
}

}  // namespace

double ExponentFormula::evaluate(double p, double alpha, double ell) const {
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  return A * (1.0 - inv_p) + B * inv_p + C + D * alpha + E * ell;
}

bool ClaimRegion::contains(double p, double alpha, int ell) const {
  const bool above = p_lo_open ? p > p_lo : p >= p_lo;
  const bool below = p_hi_open ? p < p_hi : p <= p_hi;
  return above && below && alpha >= alpha_lo && alpha <= alpha_hi && ell >= ell_lo && ell <= ell_hi;
}

const char* to_string(ClaimTarget target) {
  switch (target) {
    case ClaimTarget::solution: return "solution";
    case ClaimTarget::profile_G: return "profile_G";
    case ClaimTarget::profile_H: return "profile_H";
    case ClaimTarget::profile_Gtilde: return "profile_Gtilde";
    case ClaimTarget::nonlinearity: return "nonlinearity";
    case ClaimTarget::kernel: return "kernel";
  }
  return "";
}

const char* to_string(Comparison mode) {
  switch (mode) {
    case Comparison::two_sided: return "two_sided";
    case Comparison::upper_bound: return "upper";
    case Comparison::decreasing: return "decreasing";
  }
  return "";
}

Comparison comparison_from_string(const std::string& name) {
  if (name == "two_sided" || name == "sharp") return Comparison::two_sided;
  if (name == "upper" || name == "upper_bound") return Comparison::upper_bound;
  if (name == "decreasing") return Comparison::decreasing;
  throw std::invalid_argument("unknown comparison mode '" + name + "'");
}

const std::vector<ClaimEntry>& claim_registry() {
  static const std::vector<ClaimEntry> registry = build_registry();
  return registry;
}

const ClaimEntry& find_claim(const std::string& id) {
  for (const auto& c : claim_registry()) {
    if (c.id == id) return c;
  }
  throw std::invalid_argument("unknown claim '" + id + "'");
}

bool claim_covers(const ClaimEntry& claim, double p, double alpha, int ell) {
  for (const auto& region : claim.regions) {
    if (region.contains(p, alpha, ell)) return true;
  }
  return false;
}

double theoretical_exponent(const ClaimEntry& claim, double p, double alpha, int ell) {
  if (!claim_covers(claim, p, alpha, ell)) {
    std::ostringstream msg;
    msg << "claim " << claim.id << " does not cover p=" << p << " alpha=" << alpha << " ell=" << ell;
    throw std::out_of_range(msg.str());
  }
  return claim.exponent.evaluate(p, alpha, ell);
}

double theoretical_exponent(const std::string& claim_id, double p, double alpha, int ell) {
  return theoretical_exponent(find_claim(claim_id), p, alpha, ell);
}

}  // namespace ewave
