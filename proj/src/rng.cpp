#include "dmesim/rng.hpp"

#include <stdexcept>

namespace dmesim {

namespace {

uint64_t poisson_small(Xoshiro256& rng, double mean) {
  // Knuth inversion; O(mean) uniforms, used only for mean < 10.
  const double limit = std::exp(-mean);
  uint64_t k = 0;
  double prod = rng.u01();
  while (prod > limit) {
    ++k;
    prod *= rng.u01();
  }
  return k;
}

uint64_t poisson_ptrs(Xoshiro256& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.u01() - 0.5;
    const double v = rng.u01();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        kf * loglam - mean - std::lgamma(kf + 1.0)) {
      return static_cast<uint64_t>(kf);
    }
  }
}

}  // namespace

uint64_t poisson_draw(Xoshiro256& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::domain_error("poisson_draw: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  return mean < 10.0 ? poisson_small(rng, mean) : poisson_ptrs(rng, mean);
}

}  // namespace dmesim
