#include "dmesim/scenario.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dmesim {

AcrMask AcrMask::dme_default() {
  return AcrMask(std::map<int, double>{{0, 0.0}, {1, 60.0}});
}

double AcrMask::db_for_offset(int offset_mhz) const {
  if (offset_mhz < 0) throw std::domain_error("channel offset must be >= 0 MHz");
  const auto& table = entries_.empty() ? dme_default().entries_ : entries_;
  auto it = table.upper_bound(offset_mhz);
  if (it == table.begin()) throw std::domain_error("ACR mask has no entry at or below offset");
  return std::prev(it)->second;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "scenario validation failed with " << errors.size() << " error(s):";
  for (const auto& e : errors) os << " [" << e.field << "] " << e.message << ";";
  return os.str();
}

namespace {

void require(ValidationReport& rep, bool ok, const char* field, const std::string& msg) {
  if (!ok) rep.errors.push_back({field, msg});
}

void require_finite(ValidationReport& rep, double v, const char* field) {
  require(rep, std::isfinite(v), field, "must be finite");
}

}  // namespace

ValidationReport TransponderScenario::validate() const {
  ValidationReport rep;
  require_finite(rep, p_pu_dbm.dbm, "p_pu_dbm");
  require_finite(rep, p_su_dbm.dbm, "p_su_dbm");
  require_finite(rep, g_su_dbi, "g_su_dbi");
  require_finite(rep, g_dme_dbi, "g_dme_dbi");
  require_finite(rep, penetration_db, "penetration_db");
  require_finite(rep, a_thr_dbm.dbm, "a_thr_dbm");
  require(rep, std::isfinite(c_pathloss) && c_pathloss > 0.0, "c_pathloss", "must be > 0");
  require(rep, std::isfinite(alpha) && alpha > 2.0, "alpha",
          "must be > 2 so the first-order interference moment exists");
  require(rep, std::isfinite(sigma_db) && sigma_db > 0.0, "sigma_db", "must be > 0");
  require(rep, std::isfinite(rho) && rho >= 0.0 && rho <= 1.0, "rho", "must lie in [0, 1]");
  require(rep, std::isfinite(lambda_su) && lambda_su >= 0.0, "lambda_su", "must be >= 0");
  require(rep, std::isfinite(r_min_km) && r_min_km >= 0.0, "r_min_km", "must be >= 0");
  require(rep, std::isfinite(r_max_km) && r_min_km < r_max_km, "r_min_km",
          "must be < r_max_km");
  require(rep, std::isfinite(beta_pu) && beta_pu > 0.0 && beta_pu < 1.0, "beta_pu",
          "must lie in (0, 1)");
  require(rep, std::isfinite(acr_db) && acr_db >= 0.0, "acr_db", "must be >= 0");
  require(rep, std::isfinite(margin_db) && margin_db >= 0.0, "margin_db", "must be >= 0");
  if (rep.ok() && sigma_db <= 6.0) {
    rep.warnings.push_back({"sigma_db",
                            "log-normal composite-fading model degrades when shadowing "
                            "is below ~6 dB"});
  }
  return rep;
}

ValidationReport AirborneScenario::validate() const {
  ValidationReport rep;
  require_finite(rep, p_pu_dbm.dbm, "p_pu_dbm");
  require_finite(rep, p_su_dbm.dbm, "p_su_dbm");
  require_finite(rep, g_su_dbi, "g_su_dbi");
  require_finite(rep, g_dme_dbi, "g_dme_dbi");
  require_finite(rep, penetration_db, "penetration_db");
  require_finite(rep, a_thr_dbm.dbm, "a_thr_dbm");
  require(rep, std::isfinite(c_pathloss) && c_pathloss > 0.0, "c_pathloss", "must be > 0");
  require(rep, std::isfinite(alpha) && alpha >= 2.0, "alpha", "must be >= 2");
  require(rep, std::isfinite(h_km) && h_km > 0.0, "h_km", "must be > 0");
  require(rep, std::isfinite(t_u_s) && t_u_s >= 0.0, "t_u_s", "must be >= 0");
  require(rep, std::isfinite(v_kmh) && v_kmh >= 0.0, "v_kmh", "must be >= 0");
  require(rep, std::isfinite(lambda_su) && lambda_su >= 0.0, "lambda_su", "must be >= 0");
  require(rep, std::isfinite(r_max_km) && r_max_km > 0.0, "r_max_km", "must be > 0");
  require(rep, std::isfinite(beta_pu) && beta_pu > 0.0 && beta_pu < 1.0, "beta_pu",
          "must lie in (0, 1)");
  require(rep, std::isfinite(acr_db) && acr_db >= 0.0, "acr_db", "must be >= 0");
  require(rep, std::isfinite(margin_db) && margin_db >= 0.0, "margin_db", "must be >= 0");
  return rep;
}

void TransponderScenario::validate_or_throw() const {
  auto rep = validate();
  if (!rep.ok()) throw ValidationError(std::move(rep));
}

void AirborneScenario::validate_or_throw() const {
  auto rep = validate();
  if (!rep.ok()) throw ValidationError(std::move(rep));
}

namespace {

template <class S>
double effective_tx_power_mw_impl(const S& s) {
  return dbm_to_mw(s.p_su_dbm.dbm + s.g_su_dbi + s.g_dme_dbi - s.penetration_db);
}

template <class S>
double effective_protection_threshold_mw_impl(const S& s) {
  return dbm_to_mw(s.a_thr_dbm.dbm + s.acr_db - s.margin_db);
}

// FNV-1a over a canonical text rendering; hex-float formatting keeps the
// digest sensitive to every bit of every field.
struct Digest {
  uint64_t h = 1469598103934665603ULL;

  void bytes(const char* p, size_t n) {
    for (size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(p[i]);
      h *= 1099511628211ULL;
    }
  }
  void field(const char* name, double v) {
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "%s=%a;", name, v);
    bytes(buf, static_cast<size_t>(n));
  }
};

}  // namespace

double effective_tx_power_mw(const TransponderScenario& s) {
  return effective_tx_power_mw_impl(s);
}
double effective_tx_power_mw(const AirborneScenario& s) {
  return effective_tx_power_mw_impl(s);
}
double effective_protection_threshold_mw(const TransponderScenario& s) {
  return effective_protection_threshold_mw_impl(s);
}
double effective_protection_threshold_mw(const AirborneScenario& s) {
  return effective_protection_threshold_mw_impl(s);
}

uint64_t scenario_digest(const TransponderScenario& s) {
  Digest d;
  d.bytes("transponder;", 12);
  d.field("p_pu", s.p_pu_dbm.dbm);
  d.field("p_su", s.p_su_dbm.dbm);
  d.field("g_su", s.g_su_dbi);
  d.field("g_dme", s.g_dme_dbi);
  d.field("pen", s.penetration_db);
  d.field("c", s.c_pathloss);
  d.field("alpha", s.alpha);
  d.field("sigma", s.sigma_db);
  d.field("rho", s.rho);
  d.field("lambda", s.lambda_su);
  d.field("rmin", s.r_min_km);
  d.field("rmax", s.r_max_km);
  d.field("athr", s.a_thr_dbm.dbm);
  d.field("beta", s.beta_pu);
  d.field("acr", s.acr_db);
  d.field("margin", s.margin_db);
  return d.h;
}

uint64_t scenario_digest(const AirborneScenario& s) {
  Digest d;
  d.bytes("airborne;", 9);
  d.field("p_pu", s.p_pu_dbm.dbm);
  d.field("p_su", s.p_su_dbm.dbm);
  d.field("g_su", s.g_su_dbi);
  d.field("g_dme", s.g_dme_dbi);
  d.field("pen", s.penetration_db);
  d.field("c", s.c_pathloss);
  d.field("alpha", s.alpha);
  d.field("h", s.h_km);
  d.field("tu", s.t_u_s);
  d.field("v", s.v_kmh);
  d.field("lambda", s.lambda_su);
  d.field("rmax", s.r_max_km);
  d.field("athr", s.a_thr_dbm.dbm);
  d.field("beta", s.beta_pu);
  d.field("acr", s.acr_db);
  d.field("margin", s.margin_db);
  return d.h;
}

}  // namespace dmesim
