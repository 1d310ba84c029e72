#include "mc_kernel.hpp"

#include <cmath>
#include <numbers>

namespace dmesim::kernel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Quadrant-reduced Taylor sin/cos pair. Arguments here are in [0, 2*pi), so
// the reduction index is tiny and exact; with |r| <= pi/4 the truncated
// series are accurate to ~2e-14, plenty below the sampler's verification
// tolerance. Evaluating the pair in one pass beats two library calls and,
// unlike sincos(), it vectorizes.
inline void sincos_pair(double x, double& s_out, double& c_out) {
  constexpr double kInvPio2 = 0.6366197723675814;      // 2/pi
  constexpr double kPio2Hi = 1.5707963267948966;
  constexpr double kPio2Lo = 6.123233995736766e-17;
  const double qf = std::floor(x * kInvPio2 + 0.5);
  const int q = static_cast<int>(qf) & 3;
  const double r = (x - qf * kPio2Hi) - qf * kPio2Lo;
  const double r2 = r * r;
  // sin(r)/r and cos(r) as polynomials in r^2; coefficients are 1/n!.
  const double sp =
      1.0 +
      r2 * (-1.0 / 6 +
            r2 * (1.0 / 120 +
                  r2 * (-1.0 / 5040 +
                        r2 * (1.0 / 362880 +
                              r2 * (-1.0 / 39916800 + r2 * (1.0 / 6227020800))))));
  const double cp =
      1.0 +
      r2 * (-1.0 / 2 +
            r2 * (1.0 / 24 +
                  r2 * (-1.0 / 720 +
                        r2 * (1.0 / 40320 +
                              r2 * (-1.0 / 3628800 +
                                    r2 * (1.0 / 479001600 +
                                          r2 * (-1.0 / 87178291200)))))));
  const double s = r * sp;
  const double swap = (q & 1) ? 1.0 : 0.0;
  const double sin_base = swap * cp + (1.0 - swap) * s;
  const double cos_base = swap * s + (1.0 - swap) * cp;
  const double sign_s = (q == 2 || q == 3) ? -1.0 : 1.0;
  const double sign_c = (q == 1 || q == 2) ? -1.0 : 1.0;
  s_out = sign_s * sin_base;
  c_out = sign_c * cos_base;
}

}  // namespace

void transponder_contrib(const TransponderParams& p, double* ur, double* u1,
                         double* u2, double* z1, double* out, int m) {
  const double r_min2 = p.r_min2, span = p.span, half_alpha = p.half_alpha;
  const double sig = p.sigma_ln, rho = p.rho, rho_comp = p.rho_comp;
  const double ln_ihat = p.ln_ihat;

#pragma omp simd
  for (int j = 0; j < m; ++j) ur[j] = std::log(r_min2 + ur[j] * span);  // ur := ln r^2
#pragma omp simd
  for (int j = 0; j < m; ++j) u1[j] = std::sqrt(-2.0 * std::log(u1[j]));  // u1 := radius
#pragma omp simd
  for (int j = 0; j < m; ++j) {
    double s, c;
    sincos_pair(kTwoPi * u2[j], s, c);
    z1[j] = u1[j] * c;
    u2[j] = u1[j] * s;  // u2 := z2
  }
#pragma omp simd
  for (int j = 0; j < m; ++j) {
    const double t = ur[j];
    const double lny = sig * (rho * z1[j] + rho_comp * u2[j]);
    const double contrib = std::exp(lny - half_alpha * t);
    out[j] = (sig * z1[j] <= ln_ihat + half_alpha * t) ? contrib : 0.0;
  }
}

void airborne_contrib(const AirborneParams& p, const double* ur, double* out, int m) {
  const double r_min2 = p.r_min2, span = p.span, h2 = p.h2;
  if (p.inverse_square) {
#pragma omp simd
    for (int j = 0; j < m; ++j) {
      out[j] = 1.0 / (h2 + r_min2 + ur[j] * span);
    }
    return;
  }
  const double half_alpha = p.half_alpha;
#pragma omp simd
  for (int j = 0; j < m; ++j) {
    out[j] = std::exp(-half_alpha * std::log(h2 + r_min2 + ur[j] * span));
  }
}

}  // namespace dmesim::kernel
