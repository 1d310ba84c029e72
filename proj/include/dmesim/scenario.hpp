#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmesim/units.hpp"

namespace dmesim {

// Receiver selectivity mask: attenuation in dB as a step function of the
// channel offset in MHz. Lookup returns the entry with the largest offset
// not exceeding the requested one.
class AcrMask {
 public:
  AcrMask() = default;
  explicit AcrMask(std::map<int, double> entries) : entries_(std::move(entries)) {}

  // Default DME mask: 0 dB co-channel, 60 dB from the first adjacent channel
  // on (conservative end of the published 60-70 dB range, extended downward
  // to the 1 MHz offset and outward to all larger offsets).
  static AcrMask dme_default();

  double db_for_offset(int offset_mhz) const;
  const std::map<int, double>& entries() const { return entries_; }

 private:
  std::map<int, double> entries_;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
  std::string summary() const;
};

// Thrown when an operation receives a scenario that fails validation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error(report.summary()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Ground-transponder sharing problem. Distances in km, densities in
// users/km^2, powers in dBm/MHz. The path-loss constant is dimensioned for
// distances in km (the Hata-suburban value below gives ~148 dB at 5 km).
struct TransponderScenario {
  PowerDbm p_pu_dbm{60.0};        // transponder TX
  PowerDbm p_su_dbm{1.0};         // secondary TX per MHz
  double g_su_dbi = 0.0;          // secondary antenna gain
  double g_dme_dbi = 5.4;         // DME antenna gain
  double penetration_db = 10.0;   // building penetration loss
  double c_pathloss = 4.5e-13;    // linear path-loss constant, r in km
  double alpha = 3.5;             // path-loss exponent
  double sigma_db = 10.0;         // composite fading std
  double rho = 0.0;               // sensing/interfering fading correlation
  double lambda_su = 20.0;        // users per km^2
  double r_min_km = 0.0;          // inner annulus radius
  double r_max_km = 200.0;        // interference aggregation radius
  PowerDbm a_thr_dbm{-119.0};     // protection threshold
  double beta_pu = 1e-5;          // harmful-interference probability limit
  double acr_db = 0.0;            // adjacent-channel rejection
  double margin_db = 3.0;         // spectral-aggregation margin

  double sigma_ln() const { return sigma_db_to_ln(sigma_db); }

  ValidationReport validate() const;
  void validate_or_throw() const;
};

// Airborne-interrogator problem: free-space propagation, no fading, the
// victim at height h above the plane of the secondary users.
struct AirborneScenario {
  PowerDbm p_pu_dbm{55.0};
  PowerDbm p_su_dbm{1.0};
  double g_su_dbi = 0.0;
  double g_dme_dbi = 5.4;
  double penetration_db = 10.0;
  double c_pathloss = 5.7e-10;    // free-space constant at ~1 GHz, r in km
  double alpha = 2.0;
  double h_km = 1.0;              // interrogator height
  double t_u_s = 0.0;             // database update delay
  double v_kmh = 900.0;           // aircraft speed
  double lambda_su = 20.0;
  double r_max_km = 200.0;
  PowerDbm a_thr_dbm{-111.0};
  double beta_pu = 1e-5;
  double acr_db = 0.0;
  double margin_db = 3.0;

  ValidationReport validate() const;
  void validate_or_throw() const;
};

// Secondary TX power seen at the victim before path loss and fading:
// p_su + g_su + g_dme - penetration, converted to mW. Per-MHz powers on both
// sides, so no bandwidth term.
double effective_tx_power_mw(const TransponderScenario& s);
double effective_tx_power_mw(const AirborneScenario& s);

// Aggregate-interference limit after channel offset and margin:
// a_thr + acr - margin, in mW. The margin tightens the constraint.
double effective_protection_threshold_mw(const TransponderScenario& s);
double effective_protection_threshold_mw(const AirborneScenario& s);

// Content hashes used to stamp Monte Carlo outputs.
uint64_t scenario_digest(const TransponderScenario& s);
uint64_t scenario_digest(const AirborneScenario& s);

}  // namespace dmesim
