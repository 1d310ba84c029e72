#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace dmesim {

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;

inline double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// CDF and survival function through erfc so that deep tails keep full
// relative accuracy (never 1 - CDF subtraction).
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }
inline double normal_sf(double z) { return 0.5 * std::erfc(z / kSqrt2); }

// Inverse normal CDF, Wichura's PPND16 rational approximations
// (Applied Statistics algorithm AS 241), |error| < 1e-15 over (0, 1).
double normal_quantile(double p);

// 95% Wilson score interval for a binomial proportion.
struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
  double half_width() const { return 0.5 * (hi - lo); }
};

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = 1.959963984540054);

}  // namespace dmesim
