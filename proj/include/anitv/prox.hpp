#pragma once
// Scalar proximal maps.  soft_threshold is the prox of lambda|.|;
// power_prox minimizes lambda|v|^q + (v-c)^2/2 for q >= 1, with closed forms
// at q=1 and q=2 and a safeguarded Newton/bisection solve otherwise.

#include <cmath>

#include "errors.hpp"

namespace anitv {

inline double soft_threshold(double c, double lambda) {
  if (lambda < 0.0) throw parameter_error("soft_threshold requires lambda >= 0");
  double m = std::abs(c) - lambda;
  if (m <= 0.0) return 0.0;
  return c > 0.0 ? m : -m;
}

inline double power_prox(double c, double lambda, double q) {
  if (!(q >= 1.0)) throw parameter_error("power_prox requires q >= 1");
  if (lambda < 0.0) throw parameter_error("power_prox requires lambda >= 0");
  if (lambda == 0.0 || c == 0.0) return c;
  if (q == 1.0) return soft_threshold(c, lambda);
  if (q == 2.0) return c / (1.0 + 2.0 * lambda);

  // The minimizer has the sign of c and magnitude in [0, |c|]; it solves
  // psi(v) = lambda*q*v^(q-1) + v - a = 0 with a = |c|.  psi(0) = -a < 0 and
  // psi(a) > 0, and the objective is strictly convex on (0,inf), so the root
  // is unique.  Newton from the upper end, bisection as the safeguard.
  const double a = std::abs(c);
  double lo = 0.0, hi = a;
  double v = a;
  for (int it = 0; it < 200; ++it) {
    double psi = lambda * q * std::pow(v, q - 1.0) + v - a;
    if (psi > 0.0)
      hi = v;
    else
      lo = v;
    if (hi - lo <= 1e-14 * (1.0 + a)) break;
    double dpsi = lambda * q * (q - 1.0) * std::pow(v, q - 2.0) + 1.0;
    double step = v - psi / dpsi;
    // Fall back to bisection when Newton leaves the bracket.
    v = (step > lo && step < hi && std::isfinite(step)) ? step : 0.5 * (lo + hi);
  }
  double root = 0.5 * (lo + hi);

  // For 1 < q < 2 compare against the v = 0 candidate as well.
  double obj_root = lambda * std::pow(root, q) + 0.5 * (root - a) * (root - a);
  double obj_zero = 0.5 * a * a;
  double m = obj_zero < obj_root ? 0.0 : root;
  return c > 0.0 ? m : -m;
}

}  // namespace anitv
