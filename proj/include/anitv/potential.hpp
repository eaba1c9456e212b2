#pragma once
// Concave potentials applied to difference magnitudes: phi1(t) = t^p and
// phi2(t) = log(1 + t^p) with 0 < p < 1.  Both are continuous, concave and
// coercive on [0,inf) with phi(0) = 0, phi' > 0 on (0,inf) and
// phi'(0+) = +inf; the derivative is Lipschitz on [alpha,inf) for any
// alpha > 0.  The solver only ever evaluates phi' at magnitudes above the
// support threshold, never at 0.

#include <cmath>
#include <string>

#include "errors.hpp"

namespace anitv {

enum class PotentialKind { power, logpower };

inline const char* potential_kind_name(PotentialKind k) {
  return k == PotentialKind::power ? "power" : "logpower";
}

struct Potential {
  PotentialKind kind = PotentialKind::power;
  double p = 0.5;

  void validate() const {
    if (!(p > 0.0 && p < 1.0)) throw parameter_error("potential exponent p must lie in (0,1)");
  }

  double eval(double t) const {
    if (t < 0.0) throw domain_error("potential evaluated at negative t");
    validate();
    double tp = std::pow(t, p);
    return kind == PotentialKind::power ? tp : std::log1p(tp);
  }

  double prime(double t) const {
    if (!(t > 0.0)) throw domain_error("potential derivative requires t > 0");
    validate();
    double d = p * std::pow(t, p - 1.0);
    if (kind == PotentialKind::logpower) d /= 1.0 + std::pow(t, p);
    return d;
  }
};

inline Potential make_potential(PotentialKind kind, double p) {
  Potential pot{kind, p};
  pot.validate();
  return pot;
}

inline Potential make_potential(const std::string& name, double p) {
  if (name == "power") return make_potential(PotentialKind::power, p);
  if (name == "logpower") return make_potential(PotentialKind::logpower, p);
  throw parameter_error("unknown potential '" + name + "' (use power or logpower)");
}

}  // namespace anitv
