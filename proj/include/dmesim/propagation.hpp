#pragma once

#include "dmesim/rng.hpp"
#include "dmesim/scenario.hpp"

namespace dmesim {

// Saturation limit of the secondary receiver front end and the acceptable
// probability of exceeding it.
inline constexpr double kSaturationDbm = -30.0;
inline constexpr double kBetaSaturation = 0.02;

// Power-law path gain C * r^(-alpha); r in km, gain linear.
double path_gain(double r_km, double c, double alpha);

// Path gain over the slant path to a victim at height h above the plane:
// C * (h^2 + r^2)^(-alpha/2).
double slant_gain(double r_km, double h_km, double c, double alpha);

// One composite-fading draw for the sensing channel (x) and the interfering
// channel (y). Marginals are log-normal with 0 dB median and common log-scale
// sigma_ln; log-domain correlation is rho.
struct FadingPair {
  double x = 1.0;
  double y = 1.0;
};

FadingPair sample_fading_pair(double sigma_ln, double rho, Xoshiro256& rng);

// Density of the sensing fading X conditioned on the interfering fading
// Y = y. Undefined at rho = 1 (degenerate X == Y); callers handle that case
// separately.
double conditional_fading_density(double x, double y, double sigma_ln, double rho);

// Probability that a transponder pulse saturates a secondary receiver at
// ground distance r: Pr[P_pu * g(r) * X > I_sat] with X the scenario fading.
double saturation_probability(const TransponderScenario& s, double r_km,
                              double i_sat_dbm = kSaturationDbm);

// Adjacent-channel rejection for a channel offset on the 1 MHz grid, using
// the default DME mask.
double acr_for_offset(int delta_f_mhz);

}  // namespace dmesim
