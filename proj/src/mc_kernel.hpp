#pragma once

// Inner transform loops of the Monte Carlo simulators, compiled separately
// with value-unsafe float optimizations so the log/exp/sincos calls vectorize
// through libmvec. Inputs are plain uniform arrays, outputs per-user
// contributions; no accumulation happens here (summation stays in a
// strict-math translation unit).

namespace dmesim::kernel {

struct TransponderParams {
  double r_min2 = 0.0;      // inner radius squared
  double span = 0.0;        // r_max^2 - r_min^2
  double half_alpha = 0.0;  // alpha / 2
  double sigma_ln = 0.0;
  double rho = 0.0;
  double rho_comp = 0.0;    // sqrt(1 - rho^2)
  double ln_ihat = 0.0;     // clamped to +-1e30
};

// out[j] = r_j^{-alpha} * y_j if user j's sensing estimate passes the
// censoring test, else 0. Uniform triples (ur, u1, u2) drive the radius and a
// Box-Muller normal pair; the uniform arrays are clobbered and z1 is scratch.
void transponder_contrib(const TransponderParams& p, double* ur, double* u1,
                         double* u2, double* z1, double* out, int m);

struct AirborneParams {
  double r_min2 = 0.0;
  double span = 0.0;
  double h2 = 0.0;
  double half_alpha = 0.0;
  bool inverse_square = false;  // alpha == 2 fast path
};

// out[j] = (h^2 + r_j^2)^{-alpha/2}.
void airborne_contrib(const AirborneParams& p, const double* ur, double* out, int m);

}  // namespace dmesim::kernel
