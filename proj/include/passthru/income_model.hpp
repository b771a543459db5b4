#pragma once
// Non-Gaussian permanent/transitory income process at biennial observation
// frequency: parameter container, analytic targeted-moment predictions, and
// closed-form identification from the empirical moment vector.
//
// Conventions: sigma2_* are variances, gamma_* third central moments,
// kappa_* fourth central moments (all of the underlying annual shocks).
// The income measurement error u^y is Gaussian, so its fourth moment is
// 3*sigma2_uy^2 and never a free parameter.  NaN in a gamma/kappa field
// means "not estimated at this specification order".

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "passthru/common.hpp"
#include "passthru/moments.hpp"

namespace passthru {

struct IncomeParams {
  double sigma2_zeta = 0.0;  // variance of the permanent shock
  double gamma_zeta = nan_v;
  double kappa_zeta = nan_v;
  double sigma2_v = 0.0;     // variance of the transitory shock
  double gamma_v = nan_v;
  double kappa_v = nan_v;
  double sigma2_uy = 0.0;    // Gaussian measurement error variance

  // Feasibility of whatever moments are specified.  gamma/kappa may be NaN
  // (not estimated); a finite kappa with its gamma requires the cone
  // condition kappa >= gamma^2/sigma2 + sigma2^2.
  void validate() const {
    auto check = [](const char* who, double s2, double g3, double k4) {
      if (!(s2 >= 0.0) || !std::isfinite(s2))
        throw error(std::string("income params: ") + who + " variance must be >= 0");
      if (std::isfinite(g3) && std::isfinite(k4) && !moments_feasible(s2, g3, k4))
        throw error(std::string("income params: ") + who +
                    " central moments infeasible (kappa < gamma^2/sigma2 + sigma2^2)");
      if (s2 == 0.0 && ((std::isfinite(g3) && g3 != 0.0) || (std::isfinite(k4) && k4 != 0.0)))
        throw error(std::string("income params: ") + who +
                    " has zero variance but nonzero higher moments");
    };
    check("permanent shock", sigma2_zeta, gamma_zeta, kappa_zeta);
    check("transitory shock", sigma2_v, gamma_v, kappa_v);
    if (!(sigma2_uy >= 0.0) || !std::isfinite(sigma2_uy))
      throw error("income params: measurement error variance must be >= 0");
  }

  std::map<std::string, double> as_map() const {
    return {{"sigma2_zeta", sigma2_zeta}, {"gamma_zeta", gamma_zeta},
            {"kappa_zeta", kappa_zeta},   {"sigma2_v", sigma2_v},
            {"gamma_v", gamma_v},         {"kappa_v", kappa_v},
            {"sigma2_uy", sigma2_uy}};
  }
};

struct MeasurementErrorCalibration {
  double share = 0.04;  // fraction of the cross-sectional variance of log income
  std::optional<double> var_log_income;  // per-wave variance averaged over waves

  double sigma2_uy() const {
    if (!(share >= 0.0 && share <= 1.0))
      throw error("measurement error calibration: share must lie in [0,1]");
    if (!var_log_income)
      throw error("measurement error calibration: var_log_income not set");
    return share * *var_log_income;
  }
};

// ------------------------------------------------------------ prediction

// Analytic stationary values of the nine targeted income moments.  With
// Z_t = zeta_t + zeta_{t-1} the observed biennial growth is
// d2y_t = Z_t + (v_t - v_{t-2}) + (u_t - u_{t-2}).
inline double predict_income_moment(const IncomeParams& p, const MomentKey& key) {
  const double sz = p.sigma2_zeta, gz = p.gamma_zeta, kz = p.kappa_zeta;
  const double sv = p.sigma2_v, gv = p.gamma_v, kv = p.kappa_v;
  const double su = p.sigma2_uy;
  const std::string k = key.str();
  if (k == "y^2") return 2 * sz + 2 * sv + 2 * su;
  if (k == "y*y-2" || k == "y*y+2") return -sv - su;
  if (k == "y^3") return 2 * gz;
  if (k == "y^2*y-2") return gv;
  if (k == "y*y-2^2") return -gv;
  if (k == "y^4")
    return 2 * kz + 2 * kv + 6 * sz * sz + 6 * sv * sv + 12 * su * su +
           24 * sz * sv + 24 * sv * su + 24 * sz * su;
  if (k == "y^2*y-2^2")
    return kv + 4 * sz * sz + 3 * sv * sv + 6 * su * su + 8 * sz * sv +
           8 * sz * su + 12 * sv * su;
  if (k == "y^3*y-2" || k == "y*y-2^3")
    return -kv - 3 * sv * sv - 6 * su * su - 6 * sz * sv - 6 * sz * su - 12 * sv * su;
  throw error("no analytic income expression for moment key '" + k + "'");
}

inline MomentVector predict_income_moments(const IncomeParams& p,
                                           const std::vector<MomentKey>& set) {
  p.validate();
  MomentVector out;
  for (const auto& k : set) out.entries.push_back({k, predict_income_moment(p, k), 0});
  return out;
}

// -------------------------------------------------------- identification

// Closed forms, applied in the order variances -> third moments -> kappa_v
// -> kappa_zeta (each step substitutes the previously identified values).
// Moments the input vector lacks leave the corresponding parameters NaN.
// No feasibility checks here; identify_income wraps this with validation.
inline IncomeParams identify_income_raw(const MomentVector& m, double sigma2_uy) {
  IncomeParams p;
  p.sigma2_uy = sigma2_uy;
  const double y2 = m.at("y^2");
  const double y_ym2 = m.at("y*y-2");
  p.sigma2_zeta = 0.5 * (y2 + 2.0 * y_ym2);
  p.sigma2_v = -y_ym2 - sigma2_uy;
  const double sz = p.sigma2_zeta, sv = p.sigma2_v, su = sigma2_uy;
  if (m.has("y^3") && m.has("y^2*y-2") && m.has("y*y-2^2")) {
    p.gamma_zeta = 0.5 * (m.at("y^3") + m.at("y^2*y-2") + m.at("y*y-2^2"));
    p.gamma_v = -m.at("y*y-2^2");
  }
  if (m.has("y^4") && m.has("y^2*y-2^2")) {
    p.kappa_v = m.at("y^2*y-2^2") - 4 * sz * sz - 3 * sv * sv - 6 * su * su -
                8 * sz * sv - 8 * sz * su - 12 * sv * su;
    p.kappa_zeta = 0.5 * m.at("y^4") - p.kappa_v - 3 * sz * sz - 3 * sv * sv -
                   6 * su * su - 12 * sz * sv - 12 * sz * su - 12 * sv * su;
  }
  return p;
}

inline IncomeParams identify_income(const MomentVector& m, double sigma2_uy) {
  IncomeParams p = identify_income_raw(m, sigma2_uy);
  auto offending = [&](const std::string& who, double s2, double g3, double k4) {
    std::string msg = "income identification infeasible: " + who +
                      " implies sigma2=" + std::to_string(s2);
    if (std::isfinite(g3)) msg += ", gamma=" + std::to_string(g3);
    if (std::isfinite(k4)) msg += ", kappa=" + std::to_string(k4);
    msg += " (from moments y^2=" + std::to_string(m.at("y^2")) +
           ", y*y-2=" + std::to_string(m.at("y*y-2")) +
           ", sigma2_uy=" + std::to_string(sigma2_uy) + ")";
    return error(msg);
  };
  if (p.sigma2_zeta < 0.0)
    throw offending("permanent shock", p.sigma2_zeta, p.gamma_zeta, p.kappa_zeta);
  if (p.sigma2_v < 0.0)
    throw offending("transitory shock", p.sigma2_v, p.gamma_v, p.kappa_v);
  if (std::isfinite(p.gamma_zeta) && std::isfinite(p.kappa_zeta) &&
      !moments_feasible(p.sigma2_zeta, p.gamma_zeta, p.kappa_zeta))
    throw offending("permanent shock", p.sigma2_zeta, p.gamma_zeta, p.kappa_zeta);
  if (std::isfinite(p.gamma_v) && std::isfinite(p.kappa_v) &&
      !moments_feasible(p.sigma2_v, p.gamma_v, p.kappa_v))
    throw offending("transitory shock", p.sigma2_v, p.gamma_v, p.kappa_v);
  return p;
}

inline IncomeParams identify_income(const MomentVector& m,
                                    const MeasurementErrorCalibration& cal) {
  return identify_income(m, cal.sigma2_uy());
}

}  // namespace passthru
