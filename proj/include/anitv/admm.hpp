#pragma once
// Inner ADMM solvers for the strongly convex subproblem
//
//   H(u) = sum_{i in T} w_i |G_i^T u| + (beta/q) ||Au - b||_q^q
//          + (rho/2) ||u - x_c||^2      s.t.  G_i^T u = 0 for i not in T.
//
// For general q the fidelity is split (v ~ Au - b) alongside the difference
// split (w_i ~ G_i^T u); for q = 2 the fidelity stays quadratic in u and the
// v split disappears.  Every u-update is a circulant normal equation
//
//   (rho I + cv A^T A + r_w sum_i G_i G_i^T) u = rhs,   cv = r_v or beta,
//
// solved by per-frequency division in the DFT domain.  After the iteration
// stops, u is projected exactly onto the constraint set (off-support
// differences identically zero) by averaging over the connected components
// of the off-support equality edges.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"
#include "grid_operator.hpp"
#include "image.hpp"
#include "model.hpp"
#include "prox.hpp"

namespace anitv {

struct AdmmState {
  const Image* u = nullptr;
  const std::vector<double>* v = nullptr;         // fidelity split, general-q path only
  const CoefficientField* w = nullptr;            // difference split, zero off support
  const std::vector<double>* lambda_v = nullptr;  // general-q path only
  const std::vector<double>* lambda_w = nullptr;
  int iter = 0;
};

struct SubproblemSpec {
  const Image* x_center = nullptr;              // x^k: prox center and warm start
  const std::vector<double>* weights = nullptr; // length 2N; read only on the support
  const SupportSet* support = nullptr;          // T^k
  const RestorationModel* model = nullptr;
  double rho = 0.0;
  double r_v = 0.0;   // fidelity penalty (ignored when q = 2)
  double r_w = 0.0;   // difference penalty
  double eps_inner = 1e-5;
  int max_inner = 500;
  const std::function<void(const AdmmState&)>* observer = nullptr;  // diagnostics hook
};

struct InnerStats {
  int iterations = 0;
  double final_rel_change = 0.0;
  bool hit_max_inner = false;
  // ||Au - b - v|| at the last iterate; NaN on the q=2 path (no v split).
  double fid_split_residual = std::numeric_limits<double>::quiet_NaN();
  double max_off_support_before = 0.0;  // max_{i not in T} |G_i^T u| pre-projection
  double max_off_support_after = 0.0;   // same after projection (exactly 0)
  bool projected = false;
};

// --- scalar update rules ----------------------------------------------------

// w_i <- argmin w_i|t| + (r_w/2)(t - (g + lam/r_w))^2, i.e. soft-thresholding.
inline double w_update_scalar(double g, double lam, double r_w, double weight) {
  return soft_threshold(g + lam / r_w, weight / r_w);
}

// v_j <- argmin (beta/q)|t|^q + (r_v/2)(t - c_j)^2 with c_j = (Au)_j - b_j + lam/r_v.
inline double v_update_scalar(double au_minus_b, double lam, double r_v, double beta, double q) {
  return power_prox(au_minus_b + lam / r_v, beta / (q * r_v), q);
}

// --- normal-equation solve --------------------------------------------------

inline void divide_normal_spectrum(const std::vector<std::complex<double>>& rhs_hat,
                                   const std::vector<std::complex<double>>& blur_spectrum,
                                   const std::vector<double>& gram, double rho, double cv,
                                   double rw, std::vector<std::complex<double>>& out) {
  out.resize(rhs_hat.size());
  for (std::size_t i = 0; i < rhs_hat.size(); ++i) {
    double d = rho + cv * std::norm(blur_spectrum[i]) + rw * gram[i];
    if (!(d > 0.0))
      throw singularity_error("normal equation singular at frequency " + std::to_string(i) +
                              " (rho=" + std::to_string(rho) + ", joint spectrum vanishes)");
    out[i] = rhs_hat[i] / d;
  }
}

// Solves (rho I + cv A^T A + rw sum G_i G_i^T) u = rhs by frequency division.
inline Image solve_quadratic_system(const GridOperator& A, double rho, double cv, double rw,
                                    const Image& rhs) {
  std::vector<double> gram = gram_spectrum(A.width(), A.height());
  std::vector<std::complex<double>> rhs_hat = fft_image(rhs);
  std::vector<std::complex<double>> u_hat;
  divide_normal_spectrum(rhs_hat, A.spectrum(), gram, rho, cv, rw, u_hat);
  return ifft_image_real(u_hat, A.width(), A.height());
}

// Standalone u-update from explicit splitting state.  The fused loop in
// solve_subproblem assembles the same right-hand side with cached spectra.
inline Image u_update(const AdmmState& st, const SubproblemSpec& spec) {
  const RestorationModel& m = *spec.model;
  const Image& xc = *spec.x_center;
  const bool split_fidelity = m.q != 2.0;
  const double cv = split_fidelity ? spec.r_v : m.beta;

  Image rhs(xc.width, xc.height);
  if (split_fidelity) {
    Image s(xc.width, xc.height);
    for (std::size_t j = 0; j < s.data.size(); ++j)
      s.data[j] = spec.r_v * (m.b.data[j] + (*st.v)[j]) - (*st.lambda_v)[j];
    rhs = m.A.apply_adjoint(s);
  } else {
    rhs = m.A.apply_adjoint(m.b);
    for (double& r : rhs.data) r *= m.beta;
  }
  CoefficientField wl(xc.width, xc.height);
  for (std::size_t i = 0; i < wl.values.size(); ++i)
    wl.values[i] = spec.r_w * st.w->values[i] - (*st.lambda_w)[i];
  Image ga = gradient_adjoint(wl);
  for (std::size_t j = 0; j < rhs.data.size(); ++j)
    rhs.data[j] += spec.rho * xc.data[j] + ga.data[j];
  return solve_quadratic_system(m.A, spec.rho, cv, spec.r_w, rhs);
}

// --- exact feasibility projection -------------------------------------------
// Projects u onto {G_i^T u = 0 for i not in T}: the off-support equality
// edges partition the pixels into connected components, and the Euclidean
// projection assigns each component its mean.  Every constrained difference
// comes out exactly 0.0 (identical stored doubles).

inline Image project_onto_support_constraints(const Image& u, const SupportSet& T) {
  const int w = u.width, h = u.height;
  const std::size_t N = u.size();
  if (T.coeff_total() != 2 * N) throw shape_error("support set size does not match image");

  std::vector<std::size_t> parent(N);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];  // path halving
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  };

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!T.contains(idx)) unite(idx, static_cast<std::size_t>(y) * w + (x + 1) % w);
      if (!T.contains(N + idx)) unite(idx, static_cast<std::size_t>((y + 1) % h) * w + x);
    }

  std::vector<double> sum(N, 0.0);
  std::vector<std::size_t> cnt(N, 0);
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t r = find(i);
    sum[r] += u.data[i];
    cnt[r] += 1;
  }
  Image out(w, h);
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t r = find(i);
    out.data[i] = sum[r] / static_cast<double>(cnt[r]);
  }
  return out;
}

// --- subproblem objective ---------------------------------------------------

inline double subproblem_objective(const Image& u, const SubproblemSpec& spec) {
  const RestorationModel& m = *spec.model;
  CoefficientField g = apply_gradient(u);
  double reg = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i)
    if (spec.support->contains(i)) reg += (*spec.weights)[i] * std::abs(g.values[i]);
  Image r = m.A.apply(u);
  for (std::size_t j = 0; j < r.data.size(); ++j) r.data[j] -= m.b.data[j];
  double fid = m.beta / m.q * fidelity_power_sum(r, m.q);
  double d = l2_dist(u, *spec.x_center);
  return reg + fid + 0.5 * spec.rho * d * d;
}

// --- the solver -------------------------------------------------------------

inline std::pair<Image, InnerStats> solve_subproblem(const SubproblemSpec& spec) {
  const RestorationModel& m = *spec.model;
  const Image& xc = *spec.x_center;
  const SupportSet& T = *spec.support;
  m.validate();
  require_same_dims(xc, m.b, "solve_subproblem");
  const std::size_t N = xc.size();
  if (T.coeff_total() != 2 * N || spec.weights->size() != 2 * N)
    throw shape_error("support/weights size does not match image");
  if (!(spec.rho >= 0.0)) throw parameter_error("rho must be >= 0");
  if (!(spec.r_w > 0.0)) throw parameter_error("r_w must be positive");
  const bool split_fidelity = m.q != 2.0;
  if (split_fidelity && !(spec.r_v > 0.0)) throw parameter_error("r_v must be positive");
  if (!(spec.eps_inner > 0.0)) throw parameter_error("eps_inner must be positive");
  if (spec.max_inner < 1) throw parameter_error("max_inner must be >= 1");
  for (std::size_t i = 0; i < 2 * N; ++i)
    if (T.contains(i)) {
      double wi = (*spec.weights)[i];
      if (!(wi > 0.0) || !std::isfinite(wi))
        throw parameter_error("subproblem weights must be positive and finite on the support");
    }

  const int w = xc.width, h = xc.height;
  const double cv = split_fidelity ? spec.r_v : m.beta;
  const std::vector<std::complex<double>>& FA = m.A.spectrum();
  const std::vector<double> gram = gram_spectrum(w, h);

  // Cached frequency-domain constants.
  const std::vector<std::complex<double>> Fx = fft_image(xc);
  std::vector<std::complex<double>> fb_term;  // q=2: beta * conj(FA) .* F(b)
  if (!split_fidelity) {
    std::vector<std::complex<double>> Fb = fft_image(m.b);
    fb_term.resize(N);
    for (std::size_t i = 0; i < N; ++i) fb_term[i] = m.beta * std::conj(FA[i]) * Fb[i];
  }

  // State; warm start u^0 = x_c, multipliers zero.
  Image u = xc;
  CoefficientField gu = apply_gradient(u);
  Image Au;
  if (split_fidelity) Au = m.A.apply(u);
  std::vector<double> v, lv;
  if (split_fidelity) {
    v.assign(N, 0.0);
    lv.assign(N, 0.0);
  }
  CoefficientField wvar(w, h, 0.0);
  std::vector<double> lw(2 * N, 0.0);

  std::vector<std::complex<double>> rhs_hat(N), u_hat;
  CoefficientField wl(w, h);
  Image s(w, h);

  InnerStats stats;
  double rel = 0.0;

  for (int l = 0; l < spec.max_inner; ++l) {
    // (v^{l+1}, w^{l+1}) from u^l and the current multipliers.
    if (split_fidelity)
      for (std::size_t j = 0; j < N; ++j)
        v[j] = v_update_scalar(Au.data[j] - m.b.data[j], lv[j], spec.r_v, m.beta, m.q);
    for (std::size_t i = 0; i < 2 * N; ++i)
      wvar.values[i] = T.contains(i)
                           ? w_update_scalar(gu.values[i], lw[i], spec.r_w, (*spec.weights)[i])
                           : 0.0;

    // u^{l+1}: per-frequency normal equation.
    for (std::size_t i = 0; i < 2 * N; ++i) wl.values[i] = spec.r_w * wvar.values[i] - lw[i];
    std::vector<std::complex<double>> Fg = fft_image(gradient_adjoint(wl));
    if (split_fidelity) {
      for (std::size_t j = 0; j < N; ++j) s.data[j] = spec.r_v * (m.b.data[j] + v[j]) - lv[j];
      std::vector<std::complex<double>> Fs = fft_image(s);
      for (std::size_t i = 0; i < N; ++i)
        rhs_hat[i] = spec.rho * Fx[i] + Fg[i] + std::conj(FA[i]) * Fs[i];
    } else {
      for (std::size_t i = 0; i < N; ++i) rhs_hat[i] = spec.rho * Fx[i] + Fg[i] + fb_term[i];
    }
    divide_normal_spectrum(rhs_hat, FA, gram, spec.rho, cv, spec.r_w, u_hat);
    Image u_next = ifft_image_real(u_hat, w, h);
    if (split_fidelity) {
      for (std::size_t i = 0; i < N; ++i) u_hat[i] *= FA[i];
      Au = ifft_image_real(u_hat, w, h);
    }
    gu = apply_gradient(u_next);

    // Multipliers from u^{l+1}; the off-support branch is the same formula
    // with w_i = 0 by the augmentation rule.
    if (split_fidelity)
      for (std::size_t j = 0; j < N; ++j) lv[j] += spec.r_v * (Au.data[j] - m.b.data[j] - v[j]);
    for (std::size_t i = 0; i < 2 * N; ++i) lw[i] += spec.r_w * (gu.values[i] - wvar.values[i]);

    double diff = l2_dist(u_next, u);
    double un = l2_norm(u_next);
    if (!std::isfinite(diff) || !std::isfinite(un))
      throw divergence_error("inner solver diverged (non-finite iterate); penalties r_v=" +
                             std::to_string(spec.r_v) + ", r_w=" + std::to_string(spec.r_w));
    rel = un > 0.0 ? diff / un : diff;  // absolute fallback when ||u|| = 0
    u = std::move(u_next);
    stats.iterations = l + 1;

    if (spec.observer) {
      AdmmState st;
      st.u = &u;
      st.w = &wvar;
      st.v = split_fidelity ? &v : nullptr;
      st.lambda_v = split_fidelity ? &lv : nullptr;
      st.lambda_w = &lw;
      st.iter = l + 1;
      (*spec.observer)(st);
    }
    if (rel <= spec.eps_inner) break;
  }

  stats.final_rel_change = rel;
  stats.hit_max_inner = stats.iterations >= spec.max_inner && rel > spec.eps_inner;
  if (split_fidelity) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      double d = Au.data[j] - m.b.data[j] - v[j];
      r2 += d * d;
    }
    stats.fid_split_residual = std::sqrt(r2);
  }

  double mo = 0.0;
  for (std::size_t i = 0; i < 2 * N; ++i)
    if (!T.contains(i)) mo = std::max(mo, std::abs(gu.values[i]));
  stats.max_off_support_before = mo;

  if (T.count < 2 * N) {
    u = project_onto_support_constraints(u, T);
    stats.projected = true;
    CoefficientField gp = apply_gradient(u);
    double ma = 0.0;
    for (std::size_t i = 0; i < 2 * N; ++i)
      if (!T.contains(i)) ma = std::max(ma, std::abs(gp.values[i]));
    stats.max_off_support_after = ma;
  }
  return {std::move(u), stats};
}

}  // namespace anitv
