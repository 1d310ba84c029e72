#include "dmesim/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dmesim/normal.hpp"
#include "dmesim/propagation.hpp"
#include "dmesim/quadrature.hpp"

namespace dmesim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Keep log-threshold values finite; the normal CDF saturates far earlier, so
// the clamp does not change any result.
constexpr double kLnClamp = 1.0e6;

// Width of the Gaussian-weighted outer integrals in units of sigma_ln,
// counted from the tilted mean n*sigma_ln^2. Truncation error ~ exp(-50)
// relative, far below the quadrature tolerance.
constexpr double kOuterWidth = 10.0;

const QuadOptions kCumulantQuad{/*abs_tol=*/1e-300, /*rel_tol=*/1e-10,
                                /*max_panels=*/4000};

double clamp_ln(double v) {
  if (std::isnan(v)) throw std::domain_error("cumulant: threshold is NaN");
  return std::fmax(-kLnClamp, std::fmin(kLnClamp, v));
}

// Stable Phi(b) - Phi(a) for a <= b.
double cdf_band(double a, double b) {
  if (a + b > 0.0) return normal_sf(a) - normal_sf(b);
  return normal_cdf(b) - normal_cdf(a);
}

// Cumulant of the censored sum for rho < 1. After integrating the radial
// coordinate by parts, the n-th cumulant becomes a single expectation over
// the interfering fading Y = e^u, u ~ N(0, s^2):
//
//   k(n) = 2*pi*lambda/(n*alpha - 2) * E[ Y^n * H(u) ]
//
// with H the sum of two annulus-boundary terms, each a conditional normal
// CDF of the censoring level at the boundary, and a censored-band term whose
// inner integral over the sensing fading is a Gaussian partial moment with a
// closed form. The tilt E[Y^n f(u)] = e^{n^2 s^2/2} E[f(v + n s^2)] turns the
// weight into a plain Gaussian, which adaptive Gauss-Kronrod handles well.
double censored_cumulant_partial(int n, const TransponderScenario& s, double ln_ihat) {
  const double alpha = s.alpha;
  const double sig = s.sigma_ln();
  const double rho = s.rho;
  const double na2 = n * alpha - 2.0;
  const double sr = sig * std::sqrt(1.0 - rho * rho);
  const double c = (2.0 - n * alpha) / alpha;

  const double lnr_min = s.r_min_km > 0.0 ? std::log(s.r_min_km) : 0.0;
  const double a_lo = alpha * lnr_min + ln_ihat;  // valid only when r_min > 0
  const double a_hi = alpha * std::log(s.r_max_km) + ln_ihat;
  const double pow_lo = s.r_min_km > 0.0 ? std::pow(s.r_min_km, -na2) : 0.0;
  const double pow_hi = std::pow(s.r_max_km, -na2);
  const double log_band_pref = -c * ln_ihat + 0.5 * c * c * sr * sr;

  const auto integrand = [&](double v) {
    const double u = v + n * sig * sig;
    double h = -pow_hi * normal_cdf((a_hi - rho * u) / sr);
    if (s.r_min_km > 0.0) h += pow_lo * normal_cdf((a_lo - rho * u) / sr);
    const double shift = rho * u + c * sr * sr;
    const double b_hi = (a_hi - shift) / sr;
    const double band = s.r_min_km > 0.0 ? cdf_band((a_lo - shift) / sr, b_hi)
                                         : normal_cdf(b_hi);
    if (band > 0.0) {
      const double lp = log_band_pref + c * rho * u;
      h += (lp > 600.0) ? std::exp(lp + std::log(band)) : std::exp(lp) * band;
    }
    return normal_pdf(v / sig) / sig * h;
  };

  const double w = kOuterWidth * sig;
  const QuadResult q = integrate_adaptive(integrand, -w, w, kCumulantQuad);
  return kTwoPi * s.lambda_su / na2 * std::exp(0.5 * n * n * sig * sig) * q.value;
}

// rho = 1: sensing and interfering fading coincide, so censoring conditions
// directly on Y and the cumulant collapses to one radial integral of the
// log-normal partial moment E[Y^n 1{Y <= r^alpha i_hat}]
// = e^{n^2 s^2 / 2} Phi((alpha t + ln i_hat - n s^2)/s), t = ln r.
double degenerate_cumulant(int n, const TransponderScenario& s, double ln_ihat) {
  const double alpha = s.alpha;
  const double sig = s.sigma_ln();
  const double t_hi = std::log(s.r_max_km);
  double t_lo = (-13.0 * sig - ln_ihat + n * sig * sig) / alpha;
  if (s.r_min_km > 0.0) t_lo = std::fmax(t_lo, std::log(s.r_min_km));
  if (!(t_lo < t_hi)) return 0.0;

  const auto integrand = [&](double t) {
    return std::exp((2.0 - n * alpha) * t) *
           normal_cdf((alpha * t + ln_ihat - n * sig * sig) / sig);
  };
  const QuadResult q = integrate_adaptive(integrand, t_lo, t_hi, kCumulantQuad);
  return kTwoPi * s.lambda_su * std::exp(0.5 * n * n * sig * sig) * q.value;
}

}  // namespace

double FittedDistribution::quantile(double p) const {
  const double z = normal_quantile(p);
  return kind == FitKind::kLogNormal ? std::exp(mu + sigma * z) : mu + sigma * z;
}

double FittedDistribution::mean() const {
  return kind == FitKind::kLogNormal ? std::exp(mu + 0.5 * sigma * sigma) : mu;
}

double FittedDistribution::variance() const {
  if (kind == FitKind::kGaussian) return sigma * sigma;
  const double m = std::exp(mu + 0.5 * sigma * sigma);
  return (std::exp(sigma * sigma) - 1.0) * m * m;
}

double i_thr_hat(const TransponderScenario& s, double i_thr_mw) {
  return i_thr_mw / (effective_tx_power_mw(s) * s.c_pathloss);
}

double transponder_cumulant(int n, const TransponderScenario& s, double i_hat) {
  if (n < 1) throw std::domain_error("transponder_cumulant: order must be >= 1");
  if (!(n * s.alpha > 2.0))
    throw std::domain_error(
        "transponder_cumulant: n*alpha must exceed 2 for the moment to exist");
  if (!(i_hat >= 0.0)) throw std::domain_error("transponder_cumulant: i_hat must be >= 0");
  if (s.lambda_su == 0.0 || i_hat == 0.0) return 0.0;

  const double ln_ihat = clamp_ln(std::log(i_hat));
  const double value = (s.rho == 1.0) ? degenerate_cumulant(n, s, ln_ihat)
                                      : censored_cumulant_partial(n, s, ln_ihat);
  if (!std::isfinite(value))
    throw std::domain_error(
        "transponder_cumulant: moment diverges (uncensored field with r_min = 0?)");
  return value;
}

double airborne_cumulant(int n, const AirborneScenario& s, double r_o_km) {
  if (n < 1) throw std::domain_error("airborne_cumulant: order must be >= 1");
  if (!(r_o_km >= 0.0 && r_o_km <= s.r_max_km))
    throw std::domain_error("airborne_cumulant: exclusion radius must lie in [0, r_max]");
  const double a = s.h_km * s.h_km + s.r_max_km * s.r_max_km;
  const double b = s.h_km * s.h_km + r_o_km * r_o_km;
  const double na2 = n * s.alpha - 2.0;
  if (na2 == 0.0) return std::numbers::pi * s.lambda_su * std::log(a / b);
  return kTwoPi * s.lambda_su / na2 *
         (std::pow(b, -0.5 * na2) - std::pow(a, -0.5 * na2));
}

CumulantSet scale_cumulants(const CumulantSet& raw, double p_eff_mw, double c) {
  CumulantSet out;
  out.k.reserve(raw.k.size());
  double factor = 1.0;
  for (double v : raw.k) {
    factor *= p_eff_mw * c;
    out.k.push_back(factor * v);
  }
  return out;
}

CumulantSet transponder_cumulants(const TransponderScenario& s, double i_thr_mw,
                                  int orders) {
  const double ihat = i_thr_hat(s, i_thr_mw);
  CumulantSet raw;
  for (int n = 1; n <= orders; ++n) raw.k.push_back(transponder_cumulant(n, s, ihat));
  return scale_cumulants(raw, effective_tx_power_mw(s), s.c_pathloss);
}

CumulantSet airborne_cumulants(const AirborneScenario& s, double r_o_km, int orders) {
  CumulantSet raw;
  for (int n = 1; n <= orders; ++n) raw.k.push_back(airborne_cumulant(n, s, r_o_km));
  return scale_cumulants(raw, effective_tx_power_mw(s), s.c_pathloss);
}

FittedDistribution fit_lognormal(const CumulantSet& k) {
  if (k.order() < 2) throw std::domain_error("fit_lognormal: needs two cumulants");
  const double k1 = k.k1(), k2 = k.k2();
  if (!(k1 > 0.0 && k2 > 0.0))
    throw std::domain_error("fit_lognormal: cumulants must be positive");
  const double s2 = std::log1p(k2 / (k1 * k1));
  return {FitKind::kLogNormal, std::log(k1) - 0.5 * s2, std::sqrt(s2)};
}

FittedDistribution fit_gaussian(const CumulantSet& k) {
  if (k.order() < 2) throw std::domain_error("fit_gaussian: needs two cumulants");
  if (!(k.k2() > 0.0)) throw std::domain_error("fit_gaussian: variance must be positive");
  return {FitKind::kGaussian, k.k1(), std::sqrt(k.k2())};
}

double prob_exceed(const FittedDistribution& d, double threshold_mw) {
  if (d.kind == FitKind::kLogNormal) {
    if (!(threshold_mw > 0.0))
      throw std::domain_error("prob_exceed: log-normal threshold must be > 0");
    return normal_sf((std::log(threshold_mw) - d.mu) / d.sigma);
  }
  return normal_sf((threshold_mw - d.mu) / d.sigma);
}

double transmission_probability(const TransponderScenario& s, double i_thr_mw,
                                double r_km) {
  if (!(r_km > 0.0))
    throw std::domain_error("transmission_probability: distance must be > 0");
  if (!(i_thr_mw >= 0.0))
    throw std::domain_error("transmission_probability: threshold must be >= 0");
  if (i_thr_mw == 0.0) return 0.0;
  const double median =
      effective_tx_power_mw(s) * path_gain(r_km, s.c_pathloss, s.alpha);
  return normal_cdf(std::log(i_thr_mw / median) / s.sigma_ln());
}

}  // namespace dmesim
