#pragma once

#include <cmath>
#include <numbers>

namespace dmesim {

// dB <-> linear conversions. Powers are dBm per MHz against linear mW,
// gains/losses are plain dB against linear factors.
inline double db_to_factor(double db) { return std::pow(10.0, db / 10.0); }
inline double factor_to_db(double factor) { return 10.0 * std::log10(factor); }

inline double dbm_to_mw(double dbm) { return db_to_factor(dbm); }
inline double mw_to_dbm(double mw) { return factor_to_db(mw); }

// Log-normal fading is specified by its dB standard deviation; the natural-log
// scale parameter follows from 10*log10(X) = sigma_db * Z.
inline double sigma_db_to_ln(double sigma_db) {
  return sigma_db * std::numbers::ln10 / 10.0;
}

// Power spectral density in dBm/MHz, kept as a distinct type so mW and dBm
// values cannot be mixed up silently.
struct PowerDbm {
  double dbm = 0.0;

  constexpr PowerDbm() = default;
  constexpr explicit PowerDbm(double value_dbm) : dbm(value_dbm) {}

  double mw() const { return dbm_to_mw(dbm); }
  static PowerDbm from_mw(double mw) { return PowerDbm(mw_to_dbm(mw)); }

  bool finite() const { return std::isfinite(dbm); }

  friend bool operator==(PowerDbm a, PowerDbm b) { return a.dbm == b.dbm; }
  friend auto operator<=>(PowerDbm a, PowerDbm b) { return a.dbm <=> b.dbm; }
};

}  // namespace dmesim
