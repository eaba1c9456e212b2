#pragma once
// The restoration objective F(x) = sum_i phi(|G_i^T x|) + (beta/q)||Ax-b||_q^q,
// its decomposition into (regularizer, fidelity), and the support machinery:
// S(x) = {i : G_i^T x != 0},  T(x) = {i : |G_i^T x| > tau}.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "grid_operator.hpp"
#include "image.hpp"
#include "potential.hpp"

namespace anitv {

struct RestorationModel {
  GridOperator A;   // blur (circulant)
  Image b;          // observation
  double beta = 1.0;
  double q = 1.0;
  Potential potential;

  void validate() const {
    if (!(beta > 0.0)) throw parameter_error("beta must be positive");
    if (!(q >= 1.0)) throw parameter_error("q must be >= 1");
    if (!A.dims_match(b)) throw shape_error("blur operator and observation dimensions differ");
    potential.validate();
  }
};

struct ObjectiveParts {
  double reg = 0.0;
  double fid = 0.0;
  double total() const { return reg + fid; }
};

inline double fidelity_power_sum(const Image& r, double q) {
  double s = 0.0;
  if (q == 1.0) {
    for (double v : r.data) s += std::abs(v);
  } else if (q == 2.0) {
    for (double v : r.data) s += v * v;
  } else {
    for (double v : r.data) s += std::pow(std::abs(v), q);
  }
  return s;
}

inline ObjectiveParts objective_value(const Image& x, const RestorationModel& m) {
  require_same_dims(x, m.b, "objective_value");
  ObjectiveParts parts;
  CoefficientField g = apply_gradient(x);
  for (double v : g.values) {
    double a = std::abs(v);
    if (a != 0.0) parts.reg += m.potential.eval(a);  // phi(0) = 0 contributes nothing
  }
  Image r = m.A.apply(x);
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] -= m.b.data[i];
  parts.fid = m.beta / m.q * fidelity_power_sum(r, m.q);
  return parts;
}

// --- support sets -----------------------------------------------------------

struct SupportSet {
  std::vector<std::uint8_t> member;  // length 2N, 0/1
  std::size_t count = 0;

  std::size_t coeff_total() const { return member.size(); }
  bool contains(std::size_t i) const { return member[i] != 0; }
  bool empty() const { return count == 0; }

  bool operator==(const SupportSet& o) const { return member == o.member; }
};

inline bool is_subset(const SupportSet& a, const SupportSet& b) {
  if (a.member.size() != b.member.size()) return false;
  for (std::size_t i = 0; i < a.member.size(); ++i)
    if (a.member[i] && !b.member[i]) return false;
  return true;
}

inline SupportSet tau_support(const CoefficientField& g, double tau) {
  if (tau < 0.0) throw parameter_error("support threshold tau must be >= 0");
  SupportSet s;
  s.member.assign(g.values.size(), 0);
  for (std::size_t i = 0; i < g.values.size(); ++i)
    if (std::abs(g.values[i]) > tau) {
      s.member[i] = 1;
      ++s.count;
    }
  return s;
}

inline SupportSet tau_support(const Image& x, double tau) {
  return tau_support(apply_gradient(x), tau);
}

// --- coercivity probe -------------------------------------------------------
// Evaluates F along rays t*d for t in {1,10,100,1000}; evidence (not proof)
// that the objective grows along every direction.

struct CoercivityEntry {
  std::array<double, 4> values{};
  bool increasing_tail = false;
};

struct CoercivityReport {
  std::vector<CoercivityEntry> entries;
  bool all_increasing = true;
};

inline CoercivityReport coercivity_probe(const RestorationModel& m,
                                         const std::vector<Image>& directions) {
  static constexpr std::array<double, 4> ts = {1.0, 10.0, 100.0, 1000.0};
  CoercivityReport rep;
  for (const Image& d : directions) {
    if (l2_norm(d) == 0.0) throw parameter_error("coercivity probe direction must be nonzero");
    CoercivityEntry e;
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      Image xd(d.width, d.height);
      for (std::size_t i = 0; i < d.data.size(); ++i) xd.data[i] = ts[ti] * d.data[i];
      e.values[ti] = objective_value(xd, m).total();
    }
    e.increasing_tail = e.values[1] < e.values[2] && e.values[2] < e.values[3];
    rep.all_increasing = rep.all_increasing && e.increasing_tail;
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace anitv
