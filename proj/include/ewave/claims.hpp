#pragma once

#include <string>
#include <vector>

namespace ewave {

// Exponent of a decay estimate (1+t)^e written as
//   e = A (1 - 1/p) + B / p + C + D alpha + E ell,
// with 1/p = 0 at p = infinity.
struct ExponentFormula {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double E = 0.0;

  double evaluate(double p, double alpha, double ell) const;
};

// A box of admissible (p, alpha, ell). p bounds may be infinite.
struct ClaimRegion {
  double p_lo = 1.0;
  double p_hi = 1.0;
  bool p_lo_open = false;
  bool p_hi_open = false;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  int ell_lo = 0;
  int ell_hi = 0;

  bool contains(double p, double alpha, int ell) const;
};

// What the claim measures.
enum class ClaimTarget {
  solution,       // |grad^alpha d_t^ell u|_p
  profile_G,      // |grad^alpha (u - G)|_p
  profile_H,      // |grad^alpha (u_t - H)|_p
  profile_Gtilde, // |grad^alpha (u_tt - Gtilde)|_p
  nonlinearity,   // |F(u)|_p
  kernel          // linear kernels applied to L^1 data
};

enum class Comparison {
  two_sided,   // |fitted - theoretical| <= tol
  upper_bound, // fitted <= theoretical + tol
  decreasing   // o(.) claim: ratio to the envelope decreases
};

const char* to_string(ClaimTarget target);
const char* to_string(Comparison mode);
Comparison comparison_from_string(const std::string& name);

struct ClaimEntry {
  std::string id;
  std::string statement;  // human-readable form of the estimate
  ClaimTarget target = ClaimTarget::solution;
  ExponentFormula exponent;
  std::vector<ClaimRegion> regions;
  Comparison comparison = Comparison::two_sided;
  // Fixed derivative orders, when the family pins them (-1: free).
  int fixed_ell = -1;
};

const std::vector<ClaimEntry>& claim_registry();
// Throws std::invalid_argument for unknown ids.
const ClaimEntry& find_claim(const std::string& id);
bool claim_covers(const ClaimEntry& claim, double p, double alpha, int ell);
// Throws std::out_of_range when (p, alpha, ell) is outside the claim's range.
double theoretical_exponent(const std::string& claim_id, double p, double alpha, int ell);
double theoretical_exponent(const ClaimEntry& claim, double p, double alpha, int ell);

}  // namespace ewave
