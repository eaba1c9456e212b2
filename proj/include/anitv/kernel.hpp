#pragma once
// Blur kernel construction.  All shipped kernels are mass-preserving
// (taps sum to 1) with nonnegative taps and odd dimensions; even requested
// sizes are zero-padded at the top/left so the usual correlation origin
// floor((n+1)/2) lands on the padded center.

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace anitv {

enum class KernelKind { average, gaussian, disk, custom };

inline const char* kernel_kind_name(KernelKind k) {
  switch (k) {
    case KernelKind::average: return "average";
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::disk: return "disk";
    case KernelKind::custom: return "custom";
  }
  return "?";
}

struct Kernel {
  KernelKind kind = KernelKind::custom;
  int rows = 0, cols = 0;       // odd
  int center_row = 0, center_col = 0;
  std::vector<double> taps;     // row-major rows*cols, sums to 1
  std::string params;           // originating parameters, for manifests

  double tap(int r, int c) const { return taps[static_cast<std::size_t>(r) * cols + c]; }
};

namespace detail {

inline double tap_sum(const std::vector<double>& taps) {
  double s = 0.0;
  for (double t : taps) s += t;
  return s;
}

// Pad even-dimensioned taps with one zero row/column at the top/left so the
// result is odd with the original origin at the new center, then normalize.
inline Kernel finish_kernel(KernelKind kind, int rows, int cols, std::vector<double> taps,
                            std::string params) {
  int pr = rows % 2 == 0 ? 1 : 0;
  int pc = cols % 2 == 0 ? 1 : 0;
  if (pr || pc) {
    std::vector<double> padded(static_cast<std::size_t>(rows + pr) * (cols + pc), 0.0);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        padded[static_cast<std::size_t>(r + pr) * (cols + pc) + (c + pc)] =
            taps[static_cast<std::size_t>(r) * cols + c];
    taps = std::move(padded);
    rows += pr;
    cols += pc;
  }
  double s = tap_sum(taps);
  if (!(s > 0.0)) throw parameter_error("kernel taps must have positive mass");
  for (double& t : taps) t /= s;
  Kernel k;
  k.kind = kind;
  k.rows = rows;
  k.cols = cols;
  k.center_row = (rows - 1) / 2;
  k.center_col = (cols - 1) / 2;
  k.taps = std::move(taps);
  k.params = std::move(params);
  return k;
}

}  // namespace detail

// Total covered area of a pillbox of the given radius, estimated by 16x16
// supersampling of each unit cell.  Shared by make_disk_kernel (as its
// normalization mass) and by tests (against pi*r^2).
inline double disk_area_estimate(double radius) {
  if (!(radius > 0.0)) throw parameter_error("disk radius must be positive");
  const int R = static_cast<int>(std::ceil(radius));
  const int ss = 16;
  const double r2 = radius * radius;
  double total = 0.0;
  for (int i = -R; i <= R; ++i)
    for (int j = -R; j <= R; ++j) {
      int hit = 0;
      for (int a = 0; a < ss; ++a)
        for (int b = 0; b < ss; ++b) {
          double y = i + (a + 0.5) / ss - 0.5;
          double x = j + (b + 0.5) / ss - 0.5;
          if (y * y + x * x <= r2) ++hit;
        }
      total += static_cast<double>(hit) / (ss * ss);
    }
  return total;
}

inline Kernel make_average_kernel(int n) {
  if (n < 1) throw parameter_error("average kernel size must be >= 1");
  std::vector<double> taps(static_cast<std::size_t>(n) * n, 1.0 / (static_cast<double>(n) * n));
  return detail::finish_kernel(KernelKind::average, n, n, std::move(taps),
                               "size=" + std::to_string(n));
}

inline Kernel make_gaussian_kernel(int rows, int cols, double sigma) {
  if (rows < 1 || cols < 1) throw parameter_error("gaussian kernel size must be >= 1");
  if (!(sigma > 0.0)) throw parameter_error("gaussian sigma must be positive");
  std::vector<double> taps(static_cast<std::size_t>(rows) * cols);
  const double cy = (rows - 1) / 2.0, cx = (cols - 1) / 2.0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double dy = r - cy, dx = c - cx;
      taps[static_cast<std::size_t>(r) * cols + c] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  return detail::finish_kernel(KernelKind::gaussian, rows, cols, std::move(taps),
                               "rows=" + std::to_string(rows) + ",cols=" + std::to_string(cols) +
                                   ",sigma=" + std::to_string(sigma));
}

inline Kernel make_disk_kernel(double radius) {
  const double mass = disk_area_estimate(radius);  // validates radius
  const int R = static_cast<int>(std::ceil(radius));
  const int n = 2 * R + 1;
  const int ss = 16;
  const double r2 = radius * radius;
  std::vector<double> taps(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = -R; i <= R; ++i)
    for (int j = -R; j <= R; ++j) {
      int hit = 0;
      for (int a = 0; a < ss; ++a)
        for (int b = 0; b < ss; ++b) {
          double y = i + (a + 0.5) / ss - 0.5;
          double x = j + (b + 0.5) / ss - 0.5;
          if (y * y + x * x <= r2) ++hit;
        }
      taps[static_cast<std::size_t>(i + R) * n + (j + R)] =
          static_cast<double>(hit) / (ss * ss) / mass;
    }
  Kernel k;
  k.kind = KernelKind::disk;
  k.rows = k.cols = n;
  k.center_row = k.center_col = R;
  k.taps = std::move(taps);
  k.params = "radius=" + std::to_string(radius);
  return k;
}

// User-supplied taps; must already be odd-dimensioned and mass-preserving.
inline Kernel make_custom_kernel(int rows, int cols, std::vector<double> taps) {
  if (rows < 1 || cols < 1 || rows % 2 == 0 || cols % 2 == 0)
    throw parameter_error("custom kernel dimensions must be odd and positive");
  if (taps.size() != static_cast<std::size_t>(rows) * cols)
    throw parameter_error("custom kernel tap count does not match dimensions");
  if (std::abs(detail::tap_sum(taps) - 1.0) > 1e-12)
    throw parameter_error("custom kernel taps must sum to 1 (within 1e-12)");
  Kernel k;
  k.kind = KernelKind::custom;
  k.rows = rows;
  k.cols = cols;
  k.center_row = (rows - 1) / 2;
  k.center_col = (cols - 1) / 2;
  k.taps = std::move(taps);
  k.params = "rows=" + std::to_string(rows) + ",cols=" + std::to_string(cols);
  return k;
}

// 1x1 identity, i.e. no blur; handy for pure denoising runs.
inline Kernel make_identity_kernel() {
  Kernel k = make_custom_kernel(1, 1, {1.0});
  k.params = "identity";
  return k;
}

}  // namespace anitv
