#include "dmesim/propagation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dmesim/normal.hpp"

namespace dmesim {

double path_gain(double r_km, double c, double alpha) {
  if (!(r_km > 0.0)) throw std::domain_error("path_gain: distance must be > 0");
  return c * std::pow(r_km, -alpha);
}

double slant_gain(double r_km, double h_km, double c, double alpha) {
  if (!(h_km > 0.0)) throw std::domain_error("slant_gain: height must be > 0");
  if (!(r_km >= 0.0)) throw std::domain_error("slant_gain: ground distance must be >= 0");
  return c * std::pow(h_km * h_km + r_km * r_km, -0.5 * alpha);
}

FadingPair sample_fading_pair(double sigma_ln, double rho, Xoshiro256& rng) {
  if (!(sigma_ln > 0.0)) throw std::domain_error("sample_fading_pair: sigma_ln must be > 0");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::domain_error("sample_fading_pair: rho must be in [0,1]");
  const double z1 = normal_quantile(rng.u01());
  const double z2 = normal_quantile(rng.u01());
  const double lnx = sigma_ln * z1;
  const double lny = rho * lnx + std::sqrt(1.0 - rho * rho) * sigma_ln * z2;
  return {std::exp(lnx), std::exp(lny)};
}

double conditional_fading_density(double x, double y, double sigma_ln, double rho) {
  if (!(x > 0.0 && y > 0.0))
    throw std::domain_error("conditional_fading_density: x and y must be > 0");
  if (!(sigma_ln > 0.0))
    throw std::domain_error("conditional_fading_density: sigma_ln must be > 0");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::domain_error(
        "conditional_fading_density: rho must be in [0,1); the rho = 1 case is "
        "degenerate (X == Y)");
  const double s = sigma_ln * std::sqrt(1.0 - rho * rho);
  const double d = std::log(x) - rho * std::log(y);
  return std::exp(-0.5 * (d / s) * (d / s)) /
         (x * s * std::sqrt(2.0 * std::numbers::pi));
}

double saturation_probability(const TransponderScenario& s, double r_km,
                              double i_sat_dbm) {
  if (!(r_km > 0.0))
    throw std::domain_error("saturation_probability: distance must be > 0");
  const double median_mw = s.p_pu_dbm.mw() * path_gain(r_km, s.c_pathloss, s.alpha);
  const double z = std::log(dbm_to_mw(i_sat_dbm) / median_mw) / s.sigma_ln();
  return normal_sf(z);
}

double acr_for_offset(int delta_f_mhz) {
  return AcrMask::dme_default().db_for_offset(delta_f_mhz);
}

}  // namespace dmesim
