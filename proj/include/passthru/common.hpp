#pragma once
// Small shared utilities: error type, compensated summation, feasibility
// checks for central-moment triples, softplus reparameterization.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace passthru {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

// Kahan-Neumaier compensated accumulator; keeps long moment sums stable
// and makes the result independent of magnitude ordering quirks.
struct kahan {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// softplus bijection R -> (0, inf) and inverse, overflow-safe; used to keep
// variance parameters positive inside unconstrained optimizers.
inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
inline double softplus_inv(double y) {
  if (!(y > 0.0)) throw error("softplus_inv: argument must be positive, got " + std::to_string(y));
  return y > 30.0 ? y : std::log(std::expm1(y));
}

// A zero-mean law with variance s2, third central moment g3 and fourth
// central moment k4 exists iff k4 >= g3^2/s2 + s2^2 (two-point laws sit on
// the boundary).  s2 == 0 forces g3 == k4 == 0.
inline double kurtosis_slack(double s2, double g3, double k4) {
  if (s2 == 0.0) return (g3 == 0.0 && k4 == 0.0) ? 0.0 : -1.0;
  return k4 - g3 * g3 / s2 - s2 * s2;
}

inline bool moments_feasible(double s2, double g3, double k4) {
  if (!(s2 >= 0.0)) return false;
  if (!std::isfinite(s2) || !std::isfinite(g3) || !std::isfinite(k4)) return false;
  return kurtosis_slack(s2, g3, k4) >= 0.0;
}

}  // namespace passthru
