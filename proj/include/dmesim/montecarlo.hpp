#pragma once

#include <cstdint>
#include <vector>

#include "dmesim/normal.hpp"
#include "dmesim/rng.hpp"
#include "dmesim/scenario.hpp"

namespace dmesim {

// Neumaier-compensated accumulator; the running error bound stays at a few
// ulp regardless of term count or magnitude spread.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Aggregate-interference realizations in linear mW, one per trial, stamped
// with everything needed to reproduce them bit for bit.
struct McSample {
  std::vector<double> values;
  uint64_t trials = 0;
  uint64_t seed = 0;
  uint64_t scenario_digest = 0;
};

struct McOptions {
  uint64_t trials = 10000;
  uint64_t seed = 1;
  int threads = 0;  // 0 = all available
};

// Radii of one Poisson field on the annulus [r_min, r_max]: the count is
// Poisson(lambda * area) and each radius has density 2r / (r_max^2 - r_min^2).
std::vector<double> sample_annulus_ppp(double lambda, double r_min_km,
                                       double r_max_km, Xoshiro256& rng);

// One aggregate-interference realization per trial for the ground-transponder
// scheme: every user draws correlated sensing/interfering fading, estimates
// its own interference on the sensing channel, and contributes the
// interfering-channel value iff the estimate is within i_thr. Trials are
// independent streams indexed by (seed, trial), evaluated in parallel, and
// the result does not depend on the worker count.
McSample simulate_transponder(const TransponderScenario& s, double i_thr_mw,
                              const McOptions& opt);

// Airborne case: free-space slant path, no fading, users inside r_o excluded.
McSample simulate_airborne(const AirborneScenario& s, double r_o_km,
                           const McOptions& opt);

namespace reference {

// Serial implementations kept for testing: same trial streams and draw
// order as the parallel kernels, straightforward scalar math throughout.
// Per-trial values agree with the kernels to ~1e-12 relative.
McSample simulate_transponder(const TransponderScenario& s, double i_thr_mw,
                              uint64_t trials, uint64_t seed);
McSample simulate_airborne(const AirborneScenario& s, double r_o_km,
                           uint64_t trials, uint64_t seed);

// Largest interfering-channel contribution that passed the censoring test in
// the last simulate_transponder call (diagnostic for the rho = 1 property
// that no admitted user exceeds i_thr).
double last_max_included_xi();

}  // namespace reference

struct TailEstimate {
  double probability = 0.0;
  WilsonInterval ci;
  uint64_t exceedances = 0;
};

// Fraction of realizations above the threshold with a 95% Wilson interval.
TailEstimate empirical_tail(const McSample& sample, double threshold_mw);

// Order statistic at probability level p of a pre-sorted sample.
double empirical_quantile(const std::vector<double>& sorted_values, double p);

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;       // unbiased
  double central_m4 = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
};

SampleMoments sample_moments(const std::vector<double>& values);

}  // namespace dmesim
