#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ewave/claims.hpp"
#include "ewave/duhamel.hpp"
#include "ewave/lattice.hpp"
#include "ewave/symbols.hpp"

namespace ewave {

struct Moments;

struct Sample {
  double t = 0.0;
  double value = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // log(value) at t = 1
  double residual = 0.0;   // RMS of the log residuals
  std::size_t count = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

// Least squares of log(value) against log(t) over samples with t_lo <= t <= t_hi.
// Throws std::invalid_argument for fewer than 4 samples or a non-positive value.
RateFit fit_rate(const std::vector<Sample>& samples, double t_lo, double t_hi);
RateFit fit_rate(const std::vector<Sample>& samples);

struct AffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

AffineFit fit_affine(std::span<const double> xs, std::span<const double> ys);

// d_t^ell u in spectral form, ell in {0, 1, 2}. The second derivative comes from
// the equation: -mu|xi|^2 u - (lambda+mu) xi (xi.u) - nu|xi|^2 u_t + F(u).
VectorField time_derivative(const MaterialParams& params, const NonlinearityForm& form, const SolverState& state,
                            int ell);

struct VerifyOptions {
  double tolerance = 0.15;
  double t_min = 5.0;
  double horizon = std::numeric_limits<double>::infinity();
  // Explicit fit window; NaN selects the last decade inside the horizon.
  double t_lo = std::numeric_limits<double>::quiet_NaN();
  double t_hi = std::numeric_limits<double>::quiet_NaN();
  // Drop the zero mode before taking norms (profile gaps always do).
  bool remove_mean = false;
};

struct DecayReport {
  std::string label;     // e.g. "|grad^1 u|_2"
  std::string claim_id;
  double p = 2.0;
  double alpha = 0.0;
  int ell = 0;
  Comparison comparison = Comparison::two_sided;
  std::vector<Sample> samples;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double horizon = std::numeric_limits<double>::infinity();
  std::size_t fit_count = 0;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  double theoretical_slope = 0.0;
  double tolerance = 0.15;
  bool pass = false;

  double envelope(double t) const { return std::pow(t, theoretical_slope); }
  // Ratios value / t^theoretical over the samples inside the window.
  std::vector<double> window_ratios() const;
};

std::string quantity_label(ClaimTarget target, double p, double alpha, int ell);

// One measurement of the claim's quantity on a state. Profile targets need moments.
double measure_quantity(const MaterialParams& params, const NonlinearityForm& form, const SolverState& state,
                        ClaimTarget target, double p, double alpha, int ell, bool remove_mean = false,
                        const Moments* moments = nullptr);

// Fits the samples inside the window and applies the claim's comparison:
//   two_sided   |fitted - theoretical| <= tolerance
//   upper_bound fitted <= theoretical + tolerance
//   decreasing  value / t^theoretical strictly decreases through the window
DecayReport make_report(const ClaimEntry& claim, double p, double alpha, int ell, std::vector<Sample> samples,
                        const VerifyOptions& opts = {});

// Measures every snapshot, then make_report. Throws InsufficientHorizon when the
// window holds fewer than 4 snapshots.
DecayReport verify_estimate(const MaterialParams& params, const NonlinearityForm& form,
                            const std::vector<SolverState>& trajectory, const std::string& claim_id, double p,
                            double alpha, int ell, const VerifyOptions& opts = {}, const Moments* moments = nullptr);

// Shortest round-trip decimal form ("inf", "nan" for the specials).
std::string format_number(double v);

// Header t,value,envelope,ratio.
void write_report_csv(const std::filesystem::path& path, const DecayReport& report);
// Header claim,p,alpha,ell,fitted,theoretical,tolerance,verdict.
void write_summary_csv(const std::filesystem::path& path, const std::vector<DecayReport>& reports);
std::string summary_csv(const std::vector<DecayReport>& reports);

}  // namespace ewave
