#pragma once
// Shared helpers for the test suite and the acceptance runner.

#include <array>
#include <cmath>

#include "passthru/income_model.hpp"
#include "passthru/rng.hpp"

namespace passthru::testing {

// Random feasible central-moment triple: variance in [lo, hi], standardized
// skewness in [-3, 0], standardized kurtosis in [skew^2 + 1.5, 60] (strictly
// inside the cone, matching the documented property-test ranges).
struct ShockMoments {
  double sigma2, gamma, kappa;
};

inline ShockMoments draw_feasible_shock(Rng& r, double lo = 0.005, double hi = 0.1) {
  double s2 = lo + (hi - lo) * r.uniform();
  double skew = -3.0 * r.uniform();
  double kurt_lo = skew * skew + 1.5;
  double kurt = kurt_lo + (60.0 - kurt_lo) * r.uniform();
  double sd = std::sqrt(s2);
  return {s2, skew * s2 * sd, kurt * s2 * s2};
}

inline IncomeParams draw_feasible_income(Rng& r) {
  ShockMoments z = draw_feasible_shock(r);
  ShockMoments v = draw_feasible_shock(r);
  IncomeParams p;
  p.sigma2_zeta = z.sigma2;
  p.gamma_zeta = z.gamma;
  p.kappa_zeta = z.kappa;
  p.sigma2_v = v.sigma2;
  p.gamma_v = v.gamma;
  p.kappa_v = v.kappa;
  p.sigma2_uy = 0.001 + 0.019 * r.uniform();
  return p;
}

}  // namespace passthru::testing
