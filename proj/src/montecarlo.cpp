#include "dmesim/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "mc_kernel.hpp"

namespace dmesim {

namespace {

constexpr int kBlock = 4096;  // users per transform block, multiple of 8
constexpr double kLnHatClamp = 1e30;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DMESIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

uint64_t digest_combine(uint64_t h, double v) {
  uint64_t bits;
  static_assert(sizeof bits == sizeof v);
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xFF;
    h *= 1099511628211ULL;
  }
  return h;
}

double annulus_mean_count(double lambda, double r_min, double r_max) {
  return lambda * std::numbers::pi * (r_max * r_max - r_min * r_min);
}

// Fills one uniform array per draw slot in canonical order: each group of 8
// users consumes the generator's next vectors in slot order, so the mapping
// from stream position to (user, slot) never depends on block size.
void fill_triples(XoshiroLanes8& lanes, int m, double* ur, double* u1, double* u2) {
  for (int g = 0; g < m; g += 8) {
    lanes.next8(ur + g);
    lanes.next8(u1 + g);
    lanes.next8(u2 + g);
  }
}

void fill_singles(XoshiroLanes8& lanes, int m, double* ur) {
  for (int g = 0; g < m; g += 8) lanes.next8(ur + g);
}

// Deterministic block reduction: eight independent partial sums (one per
// lane position) combined by compensated addition.
double sum_block(const double* v, int m) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  int j = 0;
  for (; j + 8 <= m; j += 8) {
    for (int l = 0; l < 8; ++l) acc[l] += v[j + l];
  }
  for (int l = 0; j < m; ++j, ++l) acc[l] += v[j];
  KahanSum s;
  for (double a : acc) s.add(a);
  return s.value();
}

struct Buffers {
  std::vector<double> ur, u1, u2, z1, contrib;
  Buffers()
      : ur(kBlock + 8), u1(kBlock + 8), u2(kBlock + 8), z1(kBlock + 8),
        contrib(kBlock + 8) {}
};

double clamped_ln_ihat(double i_thr_mw, double p_eff_mw, double c) {
  if (!(i_thr_mw >= 0.0))
    throw std::domain_error("simulate: individual threshold must be >= 0");
  if (i_thr_mw == 0.0) return -kLnHatClamp;
  const double ln = std::log(i_thr_mw / (p_eff_mw * c));
  if (std::isnan(ln)) throw std::domain_error("simulate: threshold is NaN");
  return std::fmin(kLnHatClamp, std::fmax(-kLnHatClamp, ln));
}

double transponder_trial(const kernel::TransponderParams& kp, double mean_count,
                         uint64_t seed, uint64_t trial, Buffers& buf) {
  Xoshiro256 count_rng(trial_stream_seed(seed, trial, 0));
  const uint64_t n = poisson_draw(count_rng, mean_count);
  XoshiroLanes8 lanes(trial_stream_seed(seed, trial, 1));
  KahanSum total;
  for (uint64_t done = 0; done < n;) {
    const int m = static_cast<int>(std::min<uint64_t>(kBlock, n - done));
    fill_triples(lanes, m, buf.ur.data(), buf.u1.data(), buf.u2.data());
    kernel::transponder_contrib(kp, buf.ur.data(), buf.u1.data(), buf.u2.data(),
                                buf.z1.data(), buf.contrib.data(), m);
    total.add(sum_block(buf.contrib.data(), m));
    done += static_cast<uint64_t>(m);
  }
  return total.value();
}

double airborne_trial(const kernel::AirborneParams& kp, double mean_count,
                      uint64_t seed, uint64_t trial, Buffers& buf) {
  Xoshiro256 count_rng(trial_stream_seed(seed, trial, 0));
  const uint64_t n = poisson_draw(count_rng, mean_count);
  XoshiroLanes8 lanes(trial_stream_seed(seed, trial, 1));
  KahanSum total;
  for (uint64_t done = 0; done < n;) {
    const int m = static_cast<int>(std::min<uint64_t>(kBlock, n - done));
    fill_singles(lanes, m, buf.ur.data());
    kernel::airborne_contrib(kp, buf.ur.data(), buf.contrib.data(), m);
    total.add(sum_block(buf.contrib.data(), m));
    done += static_cast<uint64_t>(m);
  }
  return total.value();
}

template <class TrialFn>
McSample run_trials(uint64_t trials, uint64_t seed, int threads, double scale,
                    uint64_t digest, const TrialFn& trial_fn) {
  if (trials < 1) throw std::domain_error("simulate: trials must be >= 1");
  McSample out;
  out.values.resize(trials);
  out.trials = trials;
  out.seed = seed;
  out.scenario_digest = digest;
  const int nthreads = resolve_threads(threads);
#pragma omp parallel num_threads(nthreads)
  {
    Buffers buf;
#pragma omp for schedule(dynamic)
    for (int64_t i = 0; i < static_cast<int64_t>(trials); ++i) {
      out.values[static_cast<size_t>(i)] =
          scale * trial_fn(seed, static_cast<uint64_t>(i), buf);
    }
  }
  return out;
}

}  // namespace

std::vector<double> sample_annulus_ppp(double lambda, double r_min_km,
                                       double r_max_km, Xoshiro256& rng) {
  if (!(lambda >= 0.0)) throw std::domain_error("sample_annulus_ppp: lambda must be >= 0");
  if (!(r_min_km >= 0.0 && r_min_km < r_max_km))
    throw std::domain_error("sample_annulus_ppp: need 0 <= r_min < r_max");
  const uint64_t n = poisson_draw(rng, annulus_mean_count(lambda, r_min_km, r_max_km));
  const double r_min2 = r_min_km * r_min_km;
  const double span = r_max_km * r_max_km - r_min2;
  std::vector<double> radii(n);
  for (auto& r : radii) r = std::sqrt(r_min2 + rng.u01() * span);
  return radii;
}

McSample simulate_transponder(const TransponderScenario& s, double i_thr_mw,
                              const McOptions& opt) {
  s.validate_or_throw();
  const double p_eff = effective_tx_power_mw(s);
  kernel::TransponderParams kp;
  kp.r_min2 = s.r_min_km * s.r_min_km;
  kp.span = s.r_max_km * s.r_max_km - kp.r_min2;
  kp.half_alpha = 0.5 * s.alpha;
  kp.sigma_ln = s.sigma_ln();
  kp.rho = s.rho;
  kp.rho_comp = std::sqrt(1.0 - s.rho * s.rho);
  kp.ln_ihat = clamped_ln_ihat(i_thr_mw, p_eff, s.c_pathloss);
  const double mean_count = annulus_mean_count(s.lambda_su, s.r_min_km, s.r_max_km);
  const uint64_t digest = digest_combine(scenario_digest(s), i_thr_mw);
  return run_trials(opt.trials, opt.seed, opt.threads, p_eff * s.c_pathloss, digest,
                    [&](uint64_t seed, uint64_t trial, Buffers& buf) {
                      return transponder_trial(kp, mean_count, seed, trial, buf);
                    });
}

McSample simulate_airborne(const AirborneScenario& s, double r_o_km,
                           const McOptions& opt) {
  s.validate_or_throw();
  if (!(r_o_km >= 0.0 && r_o_km <= s.r_max_km))
    throw std::domain_error("simulate_airborne: need 0 <= r_o <= r_max");
  kernel::AirborneParams kp;
  kp.r_min2 = r_o_km * r_o_km;
  kp.span = s.r_max_km * s.r_max_km - kp.r_min2;
  kp.h2 = s.h_km * s.h_km;
  kp.half_alpha = 0.5 * s.alpha;
  kp.inverse_square = (s.alpha == 2.0);
  const double mean_count = annulus_mean_count(s.lambda_su, r_o_km, s.r_max_km);
  const double p_eff = effective_tx_power_mw(s);
  const uint64_t digest = digest_combine(scenario_digest(s), r_o_km);
  return run_trials(opt.trials, opt.seed, opt.threads, p_eff * s.c_pathloss, digest,
                    [&](uint64_t seed, uint64_t trial, Buffers& buf) {
                      return airborne_trial(kp, mean_count, seed, trial, buf);
                    });
}

namespace reference {

namespace {
double g_max_included_xi = 0.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double last_max_included_xi() { return g_max_included_xi; }

McSample simulate_transponder(const TransponderScenario& s, double i_thr_mw,
                              uint64_t trials, uint64_t seed) {
  s.validate_or_throw();
  if (trials < 1) throw std::domain_error("simulate: trials must be >= 1");
  const double p_eff = effective_tx_power_mw(s);
  const double scale = p_eff * s.c_pathloss;
  const double sig = s.sigma_ln();
  const double rho_comp = std::sqrt(1.0 - s.rho * s.rho);
  const double r_min2 = s.r_min_km * s.r_min_km;
  const double span = s.r_max_km * s.r_max_km - r_min2;
  const double half_alpha = 0.5 * s.alpha;
  const double ln_ihat = clamped_ln_ihat(i_thr_mw, p_eff, s.c_pathloss);
  const double mean_count = annulus_mean_count(s.lambda_su, s.r_min_km, s.r_max_km);

  McSample out;
  out.values.resize(trials);
  out.trials = trials;
  out.seed = seed;
  out.scenario_digest = digest_combine(scenario_digest(s), i_thr_mw);
  g_max_included_xi = 0.0;

  double group[3][8];
  for (uint64_t trial = 0; trial < trials; ++trial) {
    Xoshiro256 count_rng(trial_stream_seed(seed, trial, 0));
    const uint64_t n = poisson_draw(count_rng, mean_count);
    XoshiroLanes8 lanes(trial_stream_seed(seed, trial, 1));
    KahanSum total;
    for (uint64_t done = 0; done < n; done += 8) {
      lanes.next8(group[0]);
      lanes.next8(group[1]);
      lanes.next8(group[2]);
      const int in_group = static_cast<int>(std::min<uint64_t>(8, n - done));
      for (int j = 0; j < in_group; ++j) {
        const double r2 = r_min2 + group[0][j] * span;
        const double t = std::log(r2);
        const double bm = std::sqrt(-2.0 * std::log(group[1][j]));
        const double ang = kTwoPi * group[2][j];
        const double z1 = bm * std::cos(ang);
        const double z2 = bm * std::sin(ang);
        if (sig * z1 <= ln_ihat + half_alpha * t) {
          const double contrib =
              std::exp(sig * (s.rho * z1 + rho_comp * z2) - half_alpha * t);
          total.add(contrib);
          g_max_included_xi = std::fmax(g_max_included_xi, scale * contrib);
        }
      }
    }
    out.values[trial] = scale * total.value();
  }
  return out;
}

McSample simulate_airborne(const AirborneScenario& s, double r_o_km,
                           uint64_t trials, uint64_t seed) {
  s.validate_or_throw();
  if (trials < 1) throw std::domain_error("simulate: trials must be >= 1");
  if (!(r_o_km >= 0.0 && r_o_km <= s.r_max_km))
    throw std::domain_error("simulate_airborne: need 0 <= r_o <= r_max");
  const double r_min2 = r_o_km * r_o_km;
  const double span = s.r_max_km * s.r_max_km - r_min2;
  const double h2 = s.h_km * s.h_km;
  const double half_alpha = 0.5 * s.alpha;
  const double mean_count = annulus_mean_count(s.lambda_su, r_o_km, s.r_max_km);
  const double scale = effective_tx_power_mw(s) * s.c_pathloss;

  McSample out;
  out.values.resize(trials);
  out.trials = trials;
  out.seed = seed;
  out.scenario_digest = digest_combine(scenario_digest(s), r_o_km);

  double group[8];
  for (uint64_t trial = 0; trial < trials; ++trial) {
    Xoshiro256 count_rng(trial_stream_seed(seed, trial, 0));
    const uint64_t n = poisson_draw(count_rng, mean_count);
    XoshiroLanes8 lanes(trial_stream_seed(seed, trial, 1));
    KahanSum total;
    for (uint64_t done = 0; done < n; done += 8) {
      lanes.next8(group);
      const int in_group = static_cast<int>(std::min<uint64_t>(8, n - done));
      for (int j = 0; j < in_group; ++j) {
        total.add(std::pow(h2 + r_min2 + group[j] * span, -half_alpha));
      }
    }
    out.values[trial] = scale * total.value();
  }
  return out;
}

}  // namespace reference

TailEstimate empirical_tail(const McSample& sample, double threshold_mw) {
  if (sample.values.empty()) throw std::domain_error("empirical_tail: empty sample");
  uint64_t count = 0;
  for (double v : sample.values) count += (v > threshold_mw) ? 1 : 0;
  TailEstimate est;
  est.exceedances = count;
  est.probability = static_cast<double>(count) / static_cast<double>(sample.values.size());
  est.ci = wilson_interval(count, sample.values.size());
  return est;
}

double empirical_quantile(const std::vector<double>& sorted_values, double p) {
  if (sorted_values.empty()) throw std::domain_error("empirical_quantile: empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("empirical_quantile: p in (0,1]");
  const auto n = static_cast<double>(sorted_values.size());
  auto idx = static_cast<long>(std::ceil(p * n)) - 1;
  idx = std::clamp<long>(idx, 0, static_cast<long>(sorted_values.size()) - 1);
  return sorted_values[static_cast<size_t>(idx)];
}

SampleMoments sample_moments(const std::vector<double>& values) {
  if (values.size() < 2) throw std::domain_error("sample_moments: need >= 2 values");
  const double n = static_cast<double>(values.size());
  KahanSum sum;
  for (double v : values) sum.add(v);
  const double mean = sum.value() / n;
  KahanSum s2, s4;
  for (double v : values) {
    const double d = v - mean;
    s2.add(d * d);
    s4.add(d * d * d * d);
  }
  SampleMoments m;
  m.mean = mean;
  m.variance = s2.value() / (n - 1.0);
  m.central_m4 = s4.value() / n;
  const double pop_var = s2.value() / n;
  m.se_mean = std::sqrt(m.variance / n);
  m.se_variance = std::sqrt(std::fmax(0.0, m.central_m4 - pop_var * pop_var) / n);
  return m;
}

}  // namespace dmesim
