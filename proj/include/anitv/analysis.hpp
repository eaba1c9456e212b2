#pragma once
// Quality metrics (PSNR, per-phase Jaccard), the two-stage segmentation
// application (restore, then threshold intensities by 1-D k-means), and the
// lower-bound evidence report on nonzero difference magnitudes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "errors.hpp"
#include "grid_operator.hpp"
#include "image.hpp"
#include "model.hpp"
#include "solver.hpp"

namespace anitv {

// PSNR = 10 log10( N / ||x - truth||^2 ); images live in [0,1] so the peak
// is implicitly 1.  Identical images give +inf.
inline double psnr(const Image& x, const Image& truth) {
  require_same_dims(x, truth, "psnr");
  double e2 = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    double d = x.data[i] - truth.data[i];
    e2 += d * d;
  }
  if (e2 == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(x.size()) / e2);
}

struct LabelMap {
  int width = 0, height = 0;
  int K = 0;                 // phase count; labels take values in 1..K
  std::vector<int> labels;   // length width*height
};

inline double jaccard(const LabelMap& seg, const LabelMap& gt, int phase) {
  if (seg.width != gt.width || seg.height != gt.height)
    throw shape_error("jaccard: label map dimension mismatch");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < seg.labels.size(); ++i) {
    bool a = seg.labels[i] == phase, b = gt.labels[i] == phase;
    if (a && b) ++inter;
    if (a || b) ++uni;
  }
  if (uni == 0) return 1.0;  // phase absent from both maps: perfect agreement
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// --- stage two: 1-D k-means -------------------------------------------------

namespace detail {

// Optimal 1-D K-clustering.  In one dimension the clusters of an optimal
// k-means solution are contiguous runs of the sorted data, so the problem
// reduces to placing K-1 cuts -- a dynamic program over the distinct values
// (multiplicities fold into weights).  Prefix sums give each candidate run's
// within-cluster sum of squares in O(1), and because the optimal cut position
// is monotone in the right endpoint, each DP row fills in O(m log m) by
// divide and conquer on the answer.  No seeding, no local minima.
inline std::vector<double> kmeans_exact(const std::vector<double>& v,
                                        const std::vector<double>& w, int K) {
  const int m = static_cast<int>(v.size());
  std::vector<double> W(m + 1, 0.0), S(m + 1, 0.0), Q(m + 1, 0.0);
  for (int i = 0; i < m; ++i) {
    W[i + 1] = W[i] + w[i];
    S[i + 1] = S[i] + w[i] * v[i];
    Q[i + 1] = Q[i] + w[i] * v[i] * v[i];
  }
  auto cost = [&](int a, int b) {  // run v[a..b], inclusive
    double ws = W[b + 1] - W[a], s = S[b + 1] - S[a], q = Q[b + 1] - Q[a];
    return std::max(0.0, q - s * s / ws);
  };

  std::vector<double> prev(m), cur(m);
  std::vector<std::vector<int>> cut(K, std::vector<int>(m, 0));
  for (int j = 0; j < m; ++j) prev[j] = cost(0, j);
  for (int k = 1; k < K; ++k) {
    // Fill cur[lo..hi] knowing the optimal cut lies in [cutlo..cuthi].
    auto fill = [&](auto&& self, int lo, int hi, int cutlo, int cuthi) -> void {
      if (lo > hi) return;
      int j = (lo + hi) / 2;
      double best = std::numeric_limits<double>::infinity();
      int arg = cutlo;
      for (int i = std::max(cutlo, k); i <= std::min(j, cuthi); ++i) {
        double c = prev[i - 1] + cost(i, j);
        if (c < best) {  // strict: ties keep the leftmost cut
          best = c;
          arg = i;
        }
      }
      cur[j] = best;
      cut[k][j] = arg;
      self(self, lo, j - 1, cutlo, arg);
      self(self, j + 1, hi, arg, cuthi);
    };
    fill(fill, k, m - 1, k, m - 1);
    std::swap(prev, cur);
  }

  std::vector<double> centers(K);
  int hi = m - 1;
  for (int k = K - 1; k >= 0; --k) {
    int lo = k == 0 ? 0 : cut[k][hi];
    centers[k] = (S[hi + 1] - S[lo]) / (W[hi + 1] - W[lo]);
    hi = lo - 1;
  }
  return centers;  // ascending: the runs are nonempty and ordered
}

}  // namespace detail

// 1-D k-means solved exactly (globally minimal within-cluster sum of squares)
// by the contiguous-cluster dynamic program.  Centers come back ascending.
inline std::vector<double> kmeans_1d(const std::vector<double>& values, int K) {
  if (K < 1) throw parameter_error("k-means needs K >= 1");
  if (values.empty()) throw parameter_error("k-means needs data");
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct, weight;
  for (double x : sorted) {
    if (distinct.empty() || x != distinct.back()) {
      distinct.push_back(x);
      weight.push_back(1.0);
    } else {
      weight.back() += 1.0;
    }
  }
  if (distinct.size() < static_cast<std::size_t>(K))
    throw degenerate_cluster_error("k-means: fewer distinct values (" +
                                   std::to_string(distinct.size()) + ") than requested phases (" +
                                   std::to_string(K) + ")");
  return detail::kmeans_exact(distinct, weight, K);
}

// Nearest-center labeling against an ascending level list; ties take the
// lower label.  Labels are 1-based.
inline LabelMap label_by_nearest(const Image& img, const std::vector<double>& centers) {
  if (centers.empty()) throw parameter_error("label_by_nearest needs centers");
  LabelMap lm;
  lm.width = img.width;
  lm.height = img.height;
  lm.K = static_cast<int>(centers.size());
  lm.labels.resize(img.size());
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    int best = 0;
    double bestd = std::abs(img.data[i] - centers[0]);
    for (std::size_t j = 1; j < centers.size(); ++j) {
      double d = std::abs(img.data[i] - centers[j]);
      if (d < bestd) {
        bestd = d;
        best = static_cast<int>(j);
      }
    }
    lm.labels[i] = best + 1;
  }
  return lm;
}

struct QuantizeResult {
  LabelMap labels;
  std::vector<double> centers;  // ascending, one per phase
};

inline QuantizeResult quantize_labels(const Image& img, int K) {
  QuantizeResult res;
  res.centers = kmeans_1d(img.data, K);
  res.labels = label_by_nearest(img, res.centers);
  return res;
}

// --- two-stage segmentation -------------------------------------------------

struct SegmentationResult {
  LabelMap labels;
  Image restored;
  std::vector<double> centers;
  IterationTrace trace;
};

inline SegmentationResult two_stage_segment(const RestorationModel& m, const SolverConfig& cfg,
                                            int K) {
  if (K < 1) throw parameter_error("segmentation needs K >= 1");
  RunResult r = run(m, cfg);
  QuantizeResult q = quantize_labels(r.x, K);
  SegmentationResult res;
  res.labels = std::move(q.labels);
  res.restored = std::move(r.x);
  res.centers = std::move(q.centers);
  res.trace = std::move(r.trace);
  return res;
}

// --- lower-bound evidence ---------------------------------------------------

struct LowerBoundReport {
  std::size_t nonzero_count = 0;
  double theta_hat = std::numeric_limits<double>::infinity();  // min nonzero |G_i^T x|
  double max_mag = 0.0;
  double tau = 0.0;
  double gap_ratio = std::numeric_limits<double>::infinity();  // theta_hat / tau
  bool pass = true;  // theta_hat > tau, vacuously true with no nonzeros
  // 16 log-spaced bins over [theta_hat, max_mag].
  std::vector<double> bin_edges;   // size bins+1
  std::vector<std::size_t> counts; // size bins
};

inline LowerBoundReport lower_bound_report(const Image& x_star, double tau) {
  if (tau < 0.0) throw parameter_error("tau must be >= 0");
  LowerBoundReport rep;
  rep.tau = tau;
  CoefficientField g = apply_gradient(x_star);
  std::vector<double> mags;
  for (double v : g.values) {
    double a = std::abs(v);
    if (a != 0.0) mags.push_back(a);
  }
  rep.nonzero_count = mags.size();
  if (mags.empty()) return rep;  // vacuous pass
  rep.theta_hat = *std::min_element(mags.begin(), mags.end());
  rep.max_mag = *std::max_element(mags.begin(), mags.end());
  rep.pass = rep.theta_hat > tau;
  rep.gap_ratio = tau > 0.0 ? rep.theta_hat / tau : std::numeric_limits<double>::infinity();

  const int bins = 16;
  double lo = std::log10(rep.theta_hat);
  double hi = std::log10(rep.max_mag);
  if (hi <= lo) hi = lo + 1e-12;
  rep.bin_edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i)
    rep.bin_edges[i] = std::pow(10.0, lo + (hi - lo) * i / bins);
  rep.counts.assign(bins, 0);
  for (double a : mags) {
    int idx = static_cast<int>((std::log10(a) - lo) / (hi - lo) * bins);
    if (idx < 0) idx = 0;
    if (idx >= bins) idx = bins - 1;
    rep.counts[idx] += 1;
  }
  return rep;
}

}  // namespace anitv
