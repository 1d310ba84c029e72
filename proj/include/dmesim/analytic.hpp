#pragma once

#include <vector>

#include "dmesim/scenario.hpp"

namespace dmesim {

// First cumulants of the aggregate interference, k[0] the mean. Units are
// mW^n once scaled; raw point-process cumulants before scaling.
struct CumulantSet {
  std::vector<double> k;

  int order() const { return static_cast<int>(k.size()); }
  double k1() const { return k.at(0); }
  double k2() const { return k.at(1); }
};

enum class FitKind { kLogNormal, kGaussian };

// Two-parameter moment-matched model of the aggregate interference.
// mu/sigma are in log-mW for the log-normal fit and mW for the Gaussian.
struct FittedDistribution {
  FitKind kind = FitKind::kLogNormal;
  double mu = 0.0;
  double sigma = 1.0;

  double quantile(double p) const;
  double mean() const;
  double variance() const;
};

// Normalized individual threshold I_thr / (P_eff * C); the censoring rule
// compares it against r^alpha-scaled sensing fading.
double i_thr_hat(const TransponderScenario& s, double i_thr_mw);

// n-th raw cumulant of the censored interferer sum around a ground victim:
// an annulus [r_min, r_max] of density lambda, power-law path loss, and
// correlated log-normal sensing/interfering fading. A user at radius r
// contributes r^(-n*alpha) Y^n when its sensing fading X stays below
// r^alpha * i_hat. Requires n*alpha > 2; rho = 1 is handled by a degenerate
// single-integral branch (censoring acts on Y itself).
double transponder_cumulant(int n, const TransponderScenario& s, double i_hat);

// n-th raw cumulant of the free-space interferer sum around an airborne
// victim at height h with exclusion radius r_o: closed form in
// A = h^2 + r_max^2 and B = h^2 + r_o^2, with the logarithmic limit at
// n*alpha = 2.
double airborne_cumulant(int n, const AirborneScenario& s, double r_o_km);

// Converts raw point-process cumulants to aggregate-interference cumulants:
// k_out(n) = (p_eff_mw * c)^n * k_in(n).
CumulantSet scale_cumulants(const CumulantSet& raw, double p_eff_mw, double c);

// Scaled cumulants of orders 1..orders for the given censoring parameter.
CumulantSet transponder_cumulants(const TransponderScenario& s, double i_thr_mw,
                                  int orders = 2);
CumulantSet airborne_cumulants(const AirborneScenario& s, double r_o_km,
                               int orders = 2);

// Log-normal fit by inverting the first two moment relations:
// sigma^2 = ln(1 + k2/k1^2), mu = ln k1 - sigma^2/2.
FittedDistribution fit_lognormal(const CumulantSet& k);

// Gaussian fit: mean k1, variance k2.
FittedDistribution fit_gaussian(const CumulantSet& k);

// Complementary CDF at a linear-mW threshold, evaluated through erfc.
double prob_exceed(const FittedDistribution& d, double threshold_mw);

// Probability that a secondary user at ground distance r passes the
// censoring test: Pr[P_eff * g(r) * X <= i_thr].
double transmission_probability(const TransponderScenario& s, double i_thr_mw,
                                double r_km);

}  // namespace dmesim
