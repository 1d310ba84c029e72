#include "dmesim/solver.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace dmesim {

namespace {

constexpr int kMaxIterations = 200;

// Finds the boundary of {x : f(x) <= target} for f monotone increasing, i.e.
// the largest feasible x when grow_feasible_side_low, by plain bisection.
// The caller supplies a bracket with f(lo) <= target < f(hi) (or the
// degenerate cases flagged before calling).
struct Bisection {
  double lo, hi;
  int iterations = 0;

  template <class F>
  void run(const F& f, double target, double tol) {
    while (hi - lo > tol) {
      if (++iterations > kMaxIterations)
        throw std::runtime_error("bisection exceeded iteration limit");
      const double mid = 0.5 * (lo + hi);
      (f(mid) <= target ? lo : hi) = mid;
    }
  }
};

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOk: return "ok";
    case SolveStatus::kBracketTop: return "bracket-top";
    case SolveStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

double transponder_tail_probability(const TransponderScenario& s, double i_thr_dbm) {
  const CumulantSet k = transponder_cumulants(s, dbm_to_mw(i_thr_dbm));
  if (!(k.k1() > 0.0) || !(k.k2() > 0.0)) return 0.0;  // fully censored field
  return prob_exceed(fit_lognormal(k), effective_protection_threshold_mw(s));
}

FeasibilityResult solve_ithr(const TransponderScenario& s) {
  s.validate_or_throw();
  const auto tail = [&](double dbm) { return transponder_tail_probability(s, dbm); };

  FeasibilityResult res;
  double lo = -200.0, hi = 0.0;
  int evals = 0;
  double p_lo = tail(lo), p_hi = tail(hi);
  evals += 2;
  while (p_lo > s.beta_pu && lo > -400.0) {
    lo -= 50.0;
    p_lo = tail(lo);
    ++evals;
  }
  while (p_hi <= s.beta_pu && hi < 100.0) {
    hi += 50.0;
    p_hi = tail(hi);
    ++evals;
  }
  if (p_lo > p_hi)
    throw std::runtime_error("solve_ithr: tail probability is not monotone in i_thr");
  if (p_lo > s.beta_pu) {
    return {lo, p_lo, evals, lo, hi, SolveStatus::kInfeasible};
  }
  if (p_hi <= s.beta_pu) {
    return {hi, p_hi, evals, lo, hi, SolveStatus::kBracketTop};
  }
  Bisection b{lo, hi};
  b.run(tail, s.beta_pu, 0.01);
  return {b.lo, tail(b.lo), b.iterations + evals, b.lo, b.hi, SolveStatus::kOk};
}

FeasibilityResult max_density_for_power(const TransponderScenario& s_template,
                                        double p_su_dbm, double prob_floor,
                                        double r_ref_km) {
  if (!(prob_floor >= 0.0 && prob_floor < 1.0))
    throw std::domain_error("max_density_for_power: prob_floor must be in [0,1)");
  const auto tx_prob = [&](double log10_lambda) {
    TransponderScenario s = s_template;
    s.p_su_dbm = PowerDbm(p_su_dbm);
    s.lambda_su = std::pow(10.0, log10_lambda);
    const FeasibilityResult r = solve_ithr(s);
    if (r.status == SolveStatus::kInfeasible) return 0.0;
    return transmission_probability(s, dbm_to_mw(r.value), r_ref_km);
  };

  double lo = -3.0, hi = 9.0;  // users/km^2, log10
  const double t_lo = tx_prob(lo), t_hi = tx_prob(hi);
  if (t_lo < t_hi - 1e-12)
    throw std::runtime_error(
        "max_density_for_power: transmission probability is not monotone in density");
  if (t_hi >= prob_floor) {
    return {std::pow(10.0, hi), t_hi, 2, lo, hi, SolveStatus::kBracketTop};
  }
  if (t_lo < prob_floor) {
    return {std::pow(10.0, lo), t_lo, 2, lo, hi, SolveStatus::kInfeasible};
  }
  // tx_prob is decreasing in density, so its negation is increasing and the
  // feasible region is the lower interval of log-density.
  Bisection b{lo, hi};
  b.run([&](double y) { return -tx_prob(y); }, -prob_floor, 1e-3);
  const double lambda = std::pow(10.0, b.lo);
  return {lambda, tx_prob(b.lo), b.iterations + 2, lo, hi, SolveStatus::kOk};
}

double airborne_tail_probability(const AirborneScenario& s, double r_o_km) {
  const CumulantSet k = airborne_cumulants(s, r_o_km);
  const double thr = effective_protection_threshold_mw(s);
  if (!(k.k2() > 0.0)) return thr > k.k1() ? 0.0 : 1.0;
  return prob_exceed(fit_gaussian(k), thr);
}

FeasibilityResult solve_exclusion_radius(const AirborneScenario& s) {
  s.validate_or_throw();
  const auto tail = [&](double r_o) { return airborne_tail_probability(s, r_o); };

  const double p0 = tail(0.0);
  if (p0 <= s.beta_pu) {
    return {0.0, p0, 1, 0.0, s.r_max_km, SolveStatus::kOk};
  }
  const double near_top = s.r_max_km * (1.0 - 1e-9);
  if (tail(near_top) > s.beta_pu) {
    return {s.r_max_km, tail(near_top), 2, 0.0, s.r_max_km, SolveStatus::kInfeasible};
  }
  // tail decreasing in r_o: feasible side is high.
  Bisection b{-s.r_max_km, 0.0};
  b.run([&](double x) { return tail(-x); }, s.beta_pu, 0.1);
  const double r_thr = -b.lo;
  const FeasibilityResult res{r_thr, tail(r_thr), b.iterations + 2, 0.0,
                              s.r_max_km, SolveStatus::kOk};
  return res;
}

double apply_update_delay(double r_thr_km, double t_u_s, double v_kmh) {
  if (r_thr_km < 0.0 || t_u_s < 0.0 || v_kmh < 0.0)
    throw std::domain_error("apply_update_delay: arguments must be >= 0");
  if (r_thr_km == 0.0) return 0.0;
  return r_thr_km + (t_u_s * v_kmh) / 3600.0;
}

FeasibilityResult max_power_no_exclusion(const AirborneScenario& s_template,
                                         double lambda_su) {
  if (!(lambda_su > 0.0))
    throw std::domain_error("max_power_no_exclusion: density must be > 0");
  const auto tail = [&](double p_dbm) {
    AirborneScenario s = s_template;
    s.lambda_su = lambda_su;
    s.p_su_dbm = PowerDbm(p_dbm);
    return airborne_tail_probability(s, 0.0);
  };

  double lo = -100.0, hi = 100.0;
  const double p_lo = tail(lo), p_hi = tail(hi);
  if (p_lo > p_hi)
    throw std::runtime_error("max_power_no_exclusion: tail is not monotone in power");
  if (p_lo > s_template.beta_pu) {
    return {lo, p_lo, 2, lo, hi, SolveStatus::kInfeasible};
  }
  if (p_hi <= s_template.beta_pu) {
    return {hi, p_hi, 2, lo, hi, SolveStatus::kBracketTop};
  }
  Bisection b{lo, hi};
  b.run(tail, s_template.beta_pu, 0.01);
  return {b.lo, tail(b.lo), b.iterations + 2, b.lo, b.hi, SolveStatus::kOk};
}

}  // namespace dmesim
