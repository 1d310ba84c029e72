#pragma once

#include <string>

#include "dmesim/analytic.hpp"
#include "dmesim/scenario.hpp"

namespace dmesim {

enum class SolveStatus {
  kOk,           // converged to an interior solution
  kBracketTop,   // constraint inactive everywhere; value pinned to the bracket top
  kInfeasible,   // constraint violated everywhere in the bracket
};

const char* to_string(SolveStatus s);

// Result of a monotone bisection search. `value` is the solved quantity
// (i_thr in dBm, exclusion radius in km, density in users/km^2 or power in
// dBm depending on the operation); `achieved` is the constraint functional at
// the returned value.
struct FeasibilityResult {
  double value = 0.0;
  double achieved = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  SolveStatus status = SolveStatus::kOk;

  bool ok() const { return status == SolveStatus::kOk; }
};

// Largest individual threshold (dBm, 0.01 dB resolution) keeping the fitted
// tail probability at the protection threshold within beta_pu. The tail
// probability is monotone increasing in i_thr; endpoints are checked before
// bisecting.
FeasibilityResult solve_ithr(const TransponderScenario& s);

// Tail probability of the fitted aggregate at the protection threshold for a
// given individual threshold; the objective solve_ithr inverts.
double transponder_tail_probability(const TransponderScenario& s, double i_thr_dbm);

// Largest density (users/km^2) such that a user at r_ref_km still passes the
// censoring test with probability >= prob_floor under the density's solved
// i_thr. Bisection on log-density.
FeasibilityResult max_density_for_power(const TransponderScenario& s_template,
                                        double p_su_dbm, double prob_floor = 0.90,
                                        double r_ref_km = 5.0);

// Smallest exclusion radius (km, 0.1 km resolution) keeping the Gaussian-fit
// tail within beta_pu; 0 when no exclusion is needed at all.
FeasibilityResult solve_exclusion_radius(const AirborneScenario& s);

// Gaussian-fit tail probability at the protection threshold for a given
// exclusion radius.
double airborne_tail_probability(const AirborneScenario& s, double r_o_km);

// Exclusion radius grown by the database update delay: a victim reported
// t_u seconds ago may have moved t_u * v; a zero radius stays zero because
// there is nothing to inflate.
double apply_update_delay(double r_thr_km, double t_u_s, double v_kmh);

// Largest secondary TX power (dBm, 0.01 dB resolution) for which no
// exclusion region is needed at the given density.
FeasibilityResult max_power_no_exclusion(const AirborneScenario& s_template,
                                         double lambda_su);

}  // namespace dmesim
