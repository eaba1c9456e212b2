#pragma once
// Core grid containers.  An Image is a row-major real pixel grid, the
// optimization vector x in R^N.  A CoefficientField holds one value per
// difference coefficient: indices [0,N) are the horizontal differences,
// [N,2N) the vertical ones, each laid out like the pixel grid.

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace anitv {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // size width*height, row-major

  Image() = default;
  Image(int w, int h, double fill = 0.0) : width(w), height(h) {
    if (w < 1 || h < 1) throw parameter_error("image dimensions must be positive");
    data.assign(static_cast<std::size_t>(w) * h, fill);
  }

  std::size_t size() const { return data.size(); }
  double& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

struct CoefficientField {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // size 2*width*height

  CoefficientField() = default;
  CoefficientField(int w, int h, double fill = 0.0) : width(w), height(h) {
    if (w < 1 || h < 1) throw parameter_error("field dimensions must be positive");
    values.assign(2 * static_cast<std::size_t>(w) * h, fill);
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t coeff_count() const { return values.size(); }
  // horizontal coefficient at pixel (y,x) is values[y*w+x]; vertical is values[N+y*w+x]
  double& horiz(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
  double& vert(int y, int x) { return values[pixel_count() + static_cast<std::size_t>(y) * width + x]; }
  double horiz(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double vert(int y, int x) const { return values[pixel_count() + static_cast<std::size_t>(y) * width + x]; }
};

inline bool same_dims(const Image& a, const Image& b) {
  return a.width == b.width && a.height == b.height;
}

inline void require_same_dims(const Image& a, const Image& b, const char* what) {
  if (!same_dims(a, b))
    throw shape_error(std::string(what) + ": dimension mismatch");
}

inline Image constant_image(int w, int h, double v) { return Image(w, h, v); }

inline double image_mean(const Image& x) {
  double s = 0.0;
  for (double v : x.data) s += v;
  return s / static_cast<double>(x.size());
}

inline double l2_norm(const Image& x) {
  double s = 0.0;
  for (double v : x.data) s += v * v;
  return std::sqrt(s);
}

inline double l2_dist(const Image& a, const Image& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    double d = a.data[i] - b.data[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool all_finite(const Image& x) {
  for (double v : x.data)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace anitv
