// Acceptance suite: nine numbered criteria, each printing one PASS/FAIL
// line. Monte Carlo trial counts are fixed here and are heavy by design;
// expect hours of runtime for the full suite on a small machine.
//
// Usage: acceptance [--criteria 1,2,9]   (default: all nine)

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dmesim/analytic.hpp"
#include "dmesim/experiment.hpp"
#include "dmesim/montecarlo.hpp"
#include "dmesim/propagation.hpp"
#include "dmesim/scenario_file.hpp"
#include "dmesim/solver.hpp"

using namespace dmesim;

namespace {

int g_failures = 0;

void line(int criterion, bool pass, const std::string& what) {
  std::printf("[criterion %d] %s: %s\n", criterion, pass ? "PASS" : "FAIL",
              what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void detail(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  std::printf("    ");
  std::vprintf(fmt, args);
  std::printf("\n");
  std::fflush(stdout);
  va_end(args);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Analytic CDF against the Monte Carlo CDF at the reference operating
//    point (individual threshold -150 dBm, density 20 /km^2): quantiles in dB
//    within 1.5 dB over levels 0.01..0.99 for rho in {0.5, 1}, and within
//    2 dB in the upper tail (levels >= 0.99) for rho = 0.
void criterion_1() {
  const double kBodyLevels[] = {0.01, 0.02, 0.05, 0.10, 0.25, 0.50,
                                0.75, 0.90, 0.95, 0.98, 0.99};
  const double kTailLevels[] = {0.99, 0.995, 0.999, 0.9999, 0.99999};
  const uint64_t kTrials = 1000000;

  struct Case {
    double rho;
    uint64_t seed;
    bool tail_only;
    double tol_db;
  };
  const Case cases[] = {{0.5, 101, false, 1.5},
                        {1.0, 102, false, 1.5},
                        {0.0, 103, true, 2.0}};
  for (const Case& c : cases) {
    TransponderScenario s;
    s.rho = c.rho;
    const double i_thr = dbm_to_mw(-150.0);
    const FittedDistribution fit = fit_lognormal(transponder_cumulants(s, i_thr));
    McSample mc = simulate_transponder(s, i_thr, {kTrials, c.seed, 0});
    std::sort(mc.values.begin(), mc.values.end());
    double worst = 0.0;
    for (double p : (c.tail_only ? std::vector<double>(std::begin(kTailLevels),
                                                       std::end(kTailLevels))
                                 : std::vector<double>(std::begin(kBodyLevels),
                                                       std::end(kBodyLevels)))) {
      const double qa = fit.quantile(p);
      const double qm = empirical_quantile(mc.values, p);
      const double diff = std::fabs(10.0 * std::log10(qa / qm));
      detail("rho=%.1f level %.4f: analytic %.3f dBm, mc %.3f dBm, diff %.3f dB",
             c.rho, p, mw_to_dbm(qa), mw_to_dbm(qm), diff);
      worst = std::fmax(worst, diff);
    }
    line(1, worst <= c.tol_db,
         fmt(c.tail_only
                 ? "rho=0.0 tail quantiles within %.1f dB (worst %.3f dB)"
                 : "quantiles within %.1f dB over levels 0.01..0.99 (worst %.3f dB)",
             c.tol_db, worst) +
             fmt(" at rho=%.1f, 1e6 trials", c.rho));
  }
}

// ---------------------------------------------------------------------------
// 2. Campbell moment checks: MC sample mean/variance against the first two
//    analytic cumulants within three standard errors at 1e5 trials, over the
//    (lambda, rho) grid for the transponder and (lambda, r_o) for the
//    airborne victim.
// The standard errors come from the model side: the exact sampling variances
// of the mean and variance estimators are k2/N and (k4 + 2 k2^2)/N, built
// from the analytic cumulants up to order four. Sample-estimated errors
// would be meaningless for rho = 0, where the aggregate is so skewed
// (k3/k2^1.5 ~ 1e5 at the reference point) that 1e5 trials never see the
// events carrying the variance.
struct MomentCheck {
  double z_mean, z_var;
  bool ok() const { return std::fabs(z_mean) <= 3.0 && std::fabs(z_var) <= 3.0; }
};

MomentCheck moment_check(const CumulantSet& k4set, const SampleMoments& m,
                         double trials) {
  const double k2 = k4set.k[1], k4 = k4set.k[3];
  const double se_mean = std::sqrt(k2 / trials);
  const double se_var = std::sqrt((k4 + 2.0 * k2 * k2) / trials);
  return {(m.mean - k4set.k[0]) / se_mean, (m.variance - k2) / se_var};
}

void criterion_2() {
  const uint64_t kTrials = 100000;
  bool all_ok = true;
  uint64_t seed = 200;
  for (double lambda : {2.0, 20.0, 200.0}) {
    for (double rho : {0.0, 0.5, 1.0}) {
      TransponderScenario s;
      s.lambda_su = lambda;
      s.rho = rho;
      const double i_thr = dbm_to_mw(-150.0);
      const CumulantSet k = transponder_cumulants(s, i_thr, 4);
      const McSample mc = simulate_transponder(s, i_thr, {kTrials, ++seed, 0});
      const SampleMoments m = sample_moments(mc.values);
      const MomentCheck c = moment_check(k, m, static_cast<double>(kTrials));
      detail("transponder lambda=%g rho=%.1f: mean z=%+.3f, var z=%+.3g", lambda,
             rho, c.z_mean, c.z_var);
      all_ok = all_ok && c.ok();
    }
  }
  line(2, all_ok, "transponder moments within 3 SE over the 3x3 grid, 1e5 trials");

  bool air_ok = true;
  for (double lambda : {2.0, 20.0, 200.0}) {
    for (double r_o : {0.0, 25.0}) {
      AirborneScenario s;
      s.lambda_su = lambda;
      const CumulantSet k = airborne_cumulants(s, r_o, 4);
      const McSample mc = simulate_airborne(s, r_o, {kTrials, ++seed, 0});
      const SampleMoments m = sample_moments(mc.values);
      const MomentCheck c = moment_check(k, m, static_cast<double>(kTrials));
      detail("airborne lambda=%g r_o=%g: mean z=%+.3f, var z=%+.3f", lambda, r_o,
             c.z_mean, c.z_var);
      air_ok = air_ok && c.ok();
    }
  }
  line(2, air_ok, "airborne moments within 3 SE over the 3x2 grid, 1e5 trials");
}

// ---------------------------------------------------------------------------
// 3. Censored cumulants with the threshold pushed out of reach reduce to the
//    plain annulus Campbell formula within 1e-6 relative.
void criterion_3() {
  bool ok = true;
  TransponderScenario s;
  s.r_min_km = 1.0;  // the uncensored moment needs a positive inner radius
  for (double rho : {0.0, 0.5, 0.9}) {
    s.rho = rho;
    for (int n : {1, 2}) {
      const double na2 = n * s.alpha - 2.0;
      const double oracle = 2.0 * std::numbers::pi * s.lambda_su / na2 *
                            (std::pow(s.r_min_km, -na2) - std::pow(s.r_max_km, -na2)) *
                            std::exp(0.5 * n * n * s.sigma_ln() * s.sigma_ln());
      const double got = transponder_cumulant(n, s, 1e9);
      const double rel = std::fabs(got - oracle) / oracle;
      detail("n=%d rho=%.1f: relative error %.3g", n, rho, rel);
      ok = ok && rel < 1e-6;
    }
  }
  line(3, ok, "uncensored limit matches the Campbell oracle within 1e-6");
}

// ---------------------------------------------------------------------------
// 4. The logarithmic first cumulant at alpha = 2 sits inside the two-sided
//    bracket of the generic closed form at alpha = 2 +/- 1e-6, within 1e-4.
void criterion_4() {
  AirborneScenario s;
  const double lim = airborne_cumulant(1, s, 0.0);
  AirborneScenario up = s, dn = s;
  up.alpha = 2.0 + 1e-6;
  dn.alpha = 2.0 - 1e-6;
  const double a = airborne_cumulant(1, up, 0.0);
  const double b = airborne_cumulant(1, dn, 0.0);
  const double rel_a = std::fabs(a - lim) / lim;
  const double rel_b = std::fabs(b - lim) / lim;
  detail("limit %.9g, alpha=2+1e-6: %.9g (rel %.2g), alpha=2-1e-6: %.9g (rel %.2g)",
         lim, a, rel_a, b, rel_b);
  const bool ok = rel_a < 1e-4 && rel_b < 1e-4 && std::fmin(a, b) <= lim &&
                  lim <= std::fmax(a, b);
  line(4, ok, "limit form bracketed by alpha = 2 +/- 1e-6 within 1e-4");
}

// ---------------------------------------------------------------------------
// 5. Threshold orderings: the solved individual threshold falls strictly with
//    density, does not rise as the fading correlation drops, and co-channel
//    thresholds sit at least 50 dB below adjacent-channel ones.
void criterion_5() {
  const double lambdas[] = {10.0, 100.0, 1000.0, 10000.0};
  const double rhos[] = {1.0, 0.5, 0.0};
  double solved[2][3][4];
  for (int ch = 0; ch < 2; ++ch) {
    for (int ri = 0; ri < 3; ++ri) {
      for (int li = 0; li < 4; ++li) {
        TransponderScenario s;
        s.acr_db = ch == 0 ? 0.0 : 60.0;
        s.margin_db = ch == 0 ? 3.0 : 10.0;
        s.rho = rhos[ri];
        s.lambda_su = lambdas[li];
        const FeasibilityResult r = solve_ithr(s);
        solved[ch][ri][li] = r.value;
        detail("%s rho=%.1f lambda=%g: i_thr %.2f dBm (%s)",
               ch == 0 ? "co-channel " : "adjacent   ", rhos[ri], lambdas[li],
               r.value, to_string(r.status));
        if (!r.ok()) {
          line(5, false, "solver did not converge on the ordering grid");
          return;
        }
      }
    }
  }
  bool dec_lambda = true, ord_rho = true, gap = true;
  for (int ch = 0; ch < 2; ++ch) {
    for (int ri = 0; ri < 3; ++ri)
      for (int li = 0; li + 1 < 4; ++li)
        dec_lambda = dec_lambda && solved[ch][ri][li + 1] < solved[ch][ri][li];
    for (int li = 0; li < 4; ++li)
      for (int ri = 0; ri + 1 < 3; ++ri)
        ord_rho = ord_rho && solved[ch][ri + 1][li] <= solved[ch][ri][li] + 1e-9;
  }
  for (int ri = 0; ri < 3; ++ri)
    for (int li = 0; li < 4; ++li)
      gap = gap && (solved[1][ri][li] - solved[0][ri][li] >= 50.0);
  line(5, dec_lambda, "i_thr strictly decreasing in density");
  line(5, ord_rho, "i_thr nonincreasing as rho falls through {1, 0.5, 0}");
  line(5, gap, "co-channel thresholds >= 50 dB below adjacent-channel");
}

// ---------------------------------------------------------------------------
// 6. Headline feasibility numbers.
void criterion_6() {
  {
    TransponderScenario s;
    s.acr_db = 60.0;
    s.margin_db = 10.0;
    s.rho = 0.0;
    const FeasibilityResult r = max_density_for_power(s, 1.0, 0.90, 5.0);
    detail("max density at 1 dBm, rho=0, 90%% floor at 5 km: %.4g /km^2 (%s)",
           r.value, to_string(r.status));
    line(6, r.value > 1000.0, "adjacent-channel density frontier exceeds 1000/km^2");
  }
  {
    bool ok = true;
    for (double delay : {0.0, 60.0, 300.0}) {
      AirborneScenario s;
      s.acr_db = 60.0;
      s.margin_db = 10.0;
      s.lambda_su = 20.0;
      s.t_u_s = delay;
      const FeasibilityResult r = solve_exclusion_radius(s);
      const double r_o = apply_update_delay(r.value, delay, s.v_kmh);
      detail("delay %gs: r_thr %.3f km -> r_o %.3f km (%s)", delay, r.value, r_o,
             to_string(r.status));
      ok = ok && r.ok() && r.value == 0.0 && r_o == 0.0;
    }
    line(6, ok, "ACR 60 dB needs no exclusion region at any update delay");
  }
  {
    AirborneScenario s;
    s.acr_db = 60.0;
    s.margin_db = 10.0;
    const FeasibilityResult r = max_power_no_exclusion(s, 100.0);
    detail("max no-exclusion power at 100/km^2: %.3f dBm (%s)", r.value,
           to_string(r.status));
    line(6, r.ok() && std::fabs(r.value) <= 3.0,
         "no-exclusion power frontier within 0 +/- 3 dBm at 100/km^2");
  }
}

// ---------------------------------------------------------------------------
// 7. Update-delay inflation, exact values.
void criterion_7() {
  const bool a = apply_update_delay(10.0, 60.0, 900.0) == 25.0;
  const bool b = apply_update_delay(0.0, 60.0, 900.0) == 0.0 &&
                 apply_update_delay(0.0, 300.0, 900.0) == 0.0 &&
                 apply_update_delay(0.0, 1e9, 12345.0) == 0.0;
  detail("10 km + 60 s at 900 km/h -> %.17g km", apply_update_delay(10.0, 60.0, 900.0));
  line(7, a, "exclusion radius 10 km with 60 s delay at 900 km/h is exactly 25 km");
  line(7, b, "zero exclusion radius stays zero for any delay");
}

// ---------------------------------------------------------------------------
// 8. Receiver saturation stays below 2% from 1 km outward, so the aggregate
//    protection constraint is the binding one.
void criterion_8() {
  TransponderScenario s;
  bool ok = true;
  double worst = 0.0, worst_r = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double r = std::pow(10.0, std::log10(200.0) * i / 80.0);
    const double p = saturation_probability(s, r);
    if (p > worst) {
      worst = p;
      worst_r = r;
    }
    ok = ok && p < kBetaSaturation;
  }
  detail("worst saturation probability %.4g at %.2f km", worst, worst_r);
  line(8, ok, "saturation probability < 2% for all r >= 1 km");
}

// ---------------------------------------------------------------------------
// 9. Reproducibility of exports, then an end-to-end tail verification at the
//    scaled target beta = 1e-3 with 1e6 trials: the empirical exceedance
//    probability at the solved threshold must not exceed the target by more
//    than the Wilson 95% half-width.
void criterion_9() {
  {
    ParsedSpec p = parse_spec_text(
        "kind = transponder\nr_max_km = 15\nlambda_su_per_km2 = 4\n"
        "i_thr_dbm = -145\n[mc]\ntrials = 5000\nseed = 77\n");
    std::ostringstream a, b, bin1, bin2;
    export_mc(p.spec, a, false);
    export_mc(p.spec, b, false);
    export_mc(p.spec, bin1, true);
    export_mc(p.spec, bin2, true);
    const bool ok = a.str() == b.str() && !a.str().empty() &&
                    bin1.str() == bin2.str() && !bin1.str().empty();
    line(9, ok, "identical seeds give byte-identical text and binary MC exports");
  }
  {
    // rho = 1 is where the censoring scheme is exact (every admitted
    // interferer is individually capped), so the fitted tail is calibrated;
    // at low correlation the two-moment fit understates this deeply-censored
    // co-channel tail and the end-to-end check would not be meaningful.
    TransponderScenario s;
    s.rho = 1.0;
    s.beta_pu = 1e-3;  // scaled from 1e-5 so 1e6 trials resolve the tail
    const FeasibilityResult solved = solve_ithr(s);
    detail("solved i_thr at beta=1e-3: %.3f dBm (analytic tail %.3g, %s)",
           solved.value, solved.achieved, to_string(solved.status));
    const McSample mc =
        simulate_transponder(s, dbm_to_mw(solved.value), {1000000, 900, 0});
    const TailEstimate tail =
        empirical_tail(mc, effective_protection_threshold_mw(s));
    const double limit = 1e-3 + tail.ci.half_width();
    detail("empirical tail %.4g (%llu exceedances), limit %.4g", tail.probability,
           static_cast<unsigned long long>(tail.exceedances), limit);
    line(9, tail.probability <= limit,
         "MC tail at the solved threshold within the scaled target + Wilson half-width");
  }
}

// ---------------------------------------------------------------------------
// Opt-in long run (--full-beta-tail), not part of the default campaign: the
// same end-to-end check at the real protection target beta = 1e-5, which
// needs >= 1e7 trials before the Wilson interval says anything. Expect a
// day-scale runtime.
void full_beta_tail() {
  TransponderScenario s;
  s.rho = 1.0;
  const FeasibilityResult solved = solve_ithr(s);
  detail("solved i_thr at beta=1e-5: %.3f dBm (analytic tail %.3g, %s)",
         solved.value, solved.achieved, to_string(solved.status));
  const McSample mc =
      simulate_transponder(s, dbm_to_mw(solved.value), {10000000, 905, 0});
  const TailEstimate tail = empirical_tail(mc, effective_protection_threshold_mw(s));
  const double limit = 1e-5 + tail.ci.half_width();
  detail("empirical tail %.4g (%llu exceedances), limit %.4g", tail.probability,
         static_cast<unsigned long long>(tail.exceedances), limit);
  line(9, tail.probability <= limit,
       "full-target MC tail within beta = 1e-5 + Wilson half-width, 1e7 trials");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  bool long_run = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criteria") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) which.push_back(std::atoi(tok.c_str()));
    } else if (std::strcmp(argv[i], "--full-beta-tail") == 0) {
      long_run = true;
    }
  }
  if (long_run) {
    full_beta_tail();
    std::printf("%s: %d failure(s)\n",
                g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", g_failures);
    return g_failures == 0 ? 0 : 1;
  }
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  for (int c : which) {
    switch (c) {
      case 1: criterion_1(); break;
      case 2: criterion_2(); break;
      case 3: criterion_3(); break;
      case 4: criterion_4(); break;
      case 5: criterion_5(); break;
      case 6: criterion_6(); break;
      case 7: criterion_7(); break;
      case 8: criterion_8(); break;
      case 9: criterion_9(); break;
      default:
        std::fprintf(stderr, "unknown criterion %d\n", c);
        return 64;
    }
  }
  std::printf("%s: %d failure(s)\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
