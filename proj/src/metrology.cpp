#include "ewave/metrology.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ewave/errors.hpp"
#include "ewave/log.hpp"
#include "ewave/norms.hpp"
#include "ewave/profiles.hpp"

namespace ewave {

RateFit fit_rate(const std::vector<Sample>& samples, double t_lo, double t_hi) {
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    if (s.t < t_lo || s.t > t_hi) continue;
    if (!(s.t > 0.0)) throw std::invalid_argument("fit_rate: sample times must be positive");
    if (!(s.value > 0.0)) throw std::invalid_argument("fit_rate: values must be positive");
    xs.push_back(std::log(s.t));
    ys.push_back(std::log(s.value));
  }
  if (xs.size() < 4) throw std::invalid_argument("fit_rate: need at least 4 samples in the window");
  const AffineFit a = fit_affine(xs, ys);
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (a.intercept + a.slope * xs[i]);
    ss += e * e;
  }
  return {a.slope, a.intercept, std::sqrt(ss / xs.size()), xs.size(), t_lo, t_hi};
}

RateFit fit_rate(const std::vector<Sample>& samples) {
  return fit_rate(samples, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
}

AffineFit fit_affine(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_affine: size mismatch");
  if (xs.size() < 2) throw std::invalid_argument("fit_affine: need at least 2 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_affine: abscissae are all equal");
  AffineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

VectorField time_derivative(const MaterialParams& params, const NonlinearityForm& form, const SolverState& state,
                            int ell) {
  switch (ell) {
    case 0: return as_spectral(state.u_hat);
    case 1: return as_spectral(state.ut_hat);
    case 2: break;
    default: throw std::invalid_argument("time_derivative: ell must be 0, 1 or 2");
  }
  const VectorField u = as_spectral(state.u_hat);
  const VectorField ut = as_spectral(state.ut_hat);
  const auto& lat = u.lattice();
  VectorField out(lat, Representation::spectral);
  if (!form.is_zero()) out = eval_nonlinearity(form, state);
  const double lm = params.lambda + params.mu;
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    const double r = lat.frequency_norm(idx);
    const double r2 = r * r;
    const auto kv = lat.wavevector(idx);
    const auto d = symbol_direction(lat.n(), kv[0], kv[1], kv[2]);
    const int d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    Complex pu = 0.0;
    if (d2 != 0) {
      for (int c = 0; c < 3; ++c) pu += static_cast<double>(d[c]) * u.at(c, idx);
      pu /= static_cast<double>(d2);
    }
    for (int c = 0; c < 3; ++c) {
      out.at(c, idx) += -params.mu * r2 * u.at(c, idx) - lm * r2 * static_cast<double>(d[c]) * pu -
                        params.nu * r2 * ut.at(c, idx);
    }
  }
  return out;
}

std::string quantity_label(ClaimTarget target, double p, double alpha, int ell) {
  std::ostringstream s;
  const std::string grad = alpha == 0.0 ? "" : "grad^" + format_number(alpha) + " ";
  const std::string dt = ell == 0 ? "" : ell == 1 ? "d_t " : "d_t^" + std::to_string(ell) + " ";
  s << "|";
  switch (target) {
    case ClaimTarget::solution:
    case ClaimTarget::kernel: s << grad << dt << "u"; break;
    case ClaimTarget::profile_G: s << grad << "(u - G)"; break;
    case ClaimTarget::profile_H: s << grad << "(u_t - H)"; break;
    case ClaimTarget::profile_Gtilde: s << grad << "(u_tt - Gtilde)"; break;
    case ClaimTarget::nonlinearity: s << grad << "F(u)"; break;
  }
  s << "|_" << format_number(p);
  return s.str();
}

namespace {

int integer_order(double alpha) {
  if (!(alpha >= 0.0) || alpha != std::floor(alpha) || alpha > 8.0)
    throw std::invalid_argument("derivative order must be a small non-negative integer");
  return static_cast<int>(alpha);
}

}  // namespace

double measure_quantity(const MaterialParams& params, const NonlinearityForm& form, const SolverState& state,
                        ClaimTarget target, double p, double alpha, int ell, bool remove_mean, const Moments* moments) {
  const int order = integer_order(alpha);
  switch (target) {
    case ClaimTarget::solution:
    case ClaimTarget::kernel:
      return derivative_norm(time_derivative(params, form, state, ell), order, p, remove_mean);
    case ClaimTarget::nonlinearity:
      if (form.is_zero()) return 0.0;
      return derivative_norm(eval_nonlinearity(form, state), order, p, remove_mean);
    case ClaimTarget::profile_G:
    case ClaimTarget::profile_H:
    case ClaimTarget::profile_Gtilde: {
      if (!moments) throw std::invalid_argument("profile claims need moments");
      const ProfileKind kind = target == ClaimTarget::profile_G   ? ProfileKind::G
                               : target == ClaimTarget::profile_H ? ProfileKind::H
                                                                  : ProfileKind::Gtilde;
      return profile_gap_value(params, form, state, *moments, kind, order, p);
    }
  }
  return 0.0;
}

std::vector<double> DecayReport::window_ratios() const {
  std::vector<double> r;
  for (const auto& s : samples) {
    if (s.t >= window_lo && s.t <= window_hi) r.push_back(s.value / envelope(s.t));
  }
  return r;
}

DecayReport make_report(const ClaimEntry& claim, double p, double alpha, int ell, std::vector<Sample> samples,
                        const VerifyOptions& opts) {
  DecayReport rep;
  rep.claim_id = claim.id;
  rep.label = quantity_label(claim.target, p, alpha, ell);
  rep.p = p;
  rep.alpha = alpha;
  rep.ell = ell;
  rep.comparison = claim.comparison;
  rep.theoretical_slope = theoretical_exponent(claim, p, alpha, ell);
  rep.tolerance = opts.tolerance;
  rep.horizon = opts.horizon;
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.t < b.t; });
  rep.samples = std::move(samples);

  double last = 0.0;
  for (const auto& s : rep.samples) last = std::max(last, s.t);
  double hi = std::isnan(opts.t_hi) ? last : opts.t_hi;
  if (hi > opts.horizon) {
    log_warning("fit window for " + claim.id + " clipped to the no-wrap horizon " + format_number(opts.horizon));
    hi = opts.horizon;
  }
  const double lo = std::isnan(opts.t_lo) ? std::max(opts.t_min, hi / 10.0) : opts.t_lo;
  rep.window_lo = lo;
  rep.window_hi = hi;

  std::vector<Sample> in;
  bool positive = true;
  for (const auto& s : rep.samples) {
    if (s.t < lo || s.t > hi || !(s.t > 0.0)) continue;
    in.push_back(s);
    positive = positive && s.value > 0.0;
  }
  rep.fit_count = in.size();
  if (in.size() < 4) {
    throw InsufficientHorizon("claim " + claim.id + ": " + std::to_string(in.size()) + " samples in the window [" +
                              format_number(lo) + ", " + format_number(hi) + "], need 4");
  }
  if (positive) {
    const RateFit fit = fit_rate(in, lo, hi);
    rep.fitted_slope = fit.slope;
    rep.residual = fit.residual;
  } else if (claim.comparison != Comparison::decreasing) {
    throw std::invalid_argument("claim " + claim.id + ": non-positive values cannot be fitted");
  }

  switch (claim.comparison) {
    case Comparison::two_sided:
      rep.pass = std::abs(rep.fitted_slope - rep.theoretical_slope) <= rep.tolerance;
      break;
    case Comparison::upper_bound:
      rep.pass = rep.fitted_slope <= rep.theoretical_slope + rep.tolerance;
      break;
    case Comparison::decreasing:
      rep.pass = ratios_decreasing(rep.window_ratios());
      break;
  }
  return rep;
}

DecayReport verify_estimate(const MaterialParams& params, const NonlinearityForm& form,
                            const std::vector<SolverState>& trajectory, const std::string& claim_id, double p,
                            double alpha, int ell, const VerifyOptions& opts, const Moments* moments) {
  const ClaimEntry& claim = find_claim(claim_id);
  // Range check before the (expensive) measurements.
  theoretical_exponent(claim, p, alpha, ell);
  const bool mean_free = opts.remove_mean;
  std::vector<Sample> samples;
  for (const auto& s : trajectory) {
    if (!(s.t > 0.0)) continue;
    samples.push_back({s.t, measure_quantity(params, form, s, claim.target, p, alpha, ell, mean_free, moments)});
  }
  return make_report(claim, p, alpha, ell, std::move(samples), opts);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_report_csv(const std::filesystem::path& path, const DecayReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "t,value,envelope,ratio\n";
  for (const auto& s : report.samples) {
    const double env = report.envelope(s.t);
    out << format_number(s.t) << ',' << format_number(s.value) << ',' << format_number(env) << ','
        << format_number(s.value / env) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

std::string summary_csv(const std::vector<DecayReport>& reports) {
  std::ostringstream out;
  out << "claim,p,alpha,ell,fitted,theoretical,tolerance,verdict\n";
  for (const auto& r : reports) {
    out << r.claim_id << ',' << format_number(r.p) << ',' << format_number(r.alpha) << ',' << r.ell << ','
        << format_number(r.fitted_slope) << ',' << format_number(r.theoretical_slope) << ','
        << format_number(r.tolerance) << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
  return out.str();
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<DecayReport>& reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << summary_csv(reports);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace ewave
