#pragma once
// Seeded degradation pipeline and synthetic piecewise-constant test images.
// Everything here is a pure function of (parameters, seed): the generator
// derives uniforms from the raw mt19937_64 stream and normals via Box-Muller
// so results do not depend on standard-library distribution internals.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "errors.hpp"
#include "image.hpp"

namespace anitv {

class DeterministicRng {
public:
  explicit DeterministicRng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1): 53 random mantissa bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline Image add_salt_pepper(const Image& img, double level, std::uint64_t seed) {
  if (!(level >= 0.0 && level <= 1.0))
    throw parameter_error("salt-and-pepper level must lie in [0,1]");
  DeterministicRng rng(seed);
  Image out = img;
  for (double& v : out.data)
    if (rng.uniform01() < level) v = rng.uniform01() < 0.5 ? 0.0 : 1.0;
  return out;
}

inline Image add_gaussian_noise(const Image& img, double variance, std::uint64_t seed) {
  if (!(variance > 0.0)) throw parameter_error("noise variance must be positive");
  DeterministicRng rng(seed);
  const double sigma = std::sqrt(variance);
  Image out = img;
  for (double& v : out.data) v += sigma * rng.normal();
  return out;
}

// --- synthetic test images --------------------------------------------------
// All generators paint axis-aligned/elliptical phases at fixed fractional
// positions, so any size >= 16x16 gives the same structure.  Each image is
// exactly piecewise constant with the stated number of intensity levels.

enum class TestImageKind { squares, twocircles, phantom_like, geometry_like };

inline const char* test_image_kind_name(TestImageKind k) {
  switch (k) {
    case TestImageKind::squares: return "squares";
    case TestImageKind::twocircles: return "twocircles";
    case TestImageKind::phantom_like: return "phantom";
    case TestImageKind::geometry_like: return "geometry";
  }
  return "?";
}

inline TestImageKind test_image_kind_from_name(const std::string& name) {
  if (name == "squares") return TestImageKind::squares;
  if (name == "twocircles") return TestImageKind::twocircles;
  if (name == "phantom") return TestImageKind::phantom_like;
  if (name == "geometry") return TestImageKind::geometry_like;
  throw parameter_error("unknown test image '" + name +
                        "' (use squares, twocircles, phantom, geometry)");
}

namespace detail {

inline void paint_rect(Image& img, double y0, double y1, double x0, double x1, double v) {
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double fy = (y + 0.5) / img.height, fx = (x + 0.5) / img.width;
      if (fy >= y0 && fy < y1 && fx >= x0 && fx < x1) img.at(y, x) = v;
    }
}

inline void paint_ellipse(Image& img, double cy, double cx, double ry, double rx, double v) {
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double fy = (y + 0.5) / img.height, fx = (x + 0.5) / img.width;
      double dy = (fy - cy) / ry, dx = (fx - cx) / rx;
      if (dy * dy + dx * dx <= 1.0) img.at(y, x) = v;
    }
}

}  // namespace detail

inline Image make_test_image(TestImageKind kind, int width, int height) {
  if (width < 16 || height < 16)
    throw parameter_error("test images require dimensions of at least 16x16");
  using detail::paint_ellipse;
  using detail::paint_rect;
  switch (kind) {
    case TestImageKind::squares: {
      // Two levels: background plus three squares at the same intensity.
      Image img(width, height, 0.2);
      paint_rect(img, 0.10, 0.40, 0.10, 0.40, 0.85);
      paint_rect(img, 0.15, 0.35, 0.55, 0.90, 0.85);
      paint_rect(img, 0.55, 0.90, 0.20, 0.60, 0.85);
      return img;
    }
    case TestImageKind::twocircles: {
      // Three levels: background and two disjoint disks.
      Image img(width, height, 0.1);
      paint_ellipse(img, 0.32, 0.30, 0.18, 0.18, 0.55);
      paint_ellipse(img, 0.64, 0.66, 0.22, 0.22, 0.95);
      return img;
    }
    case TestImageKind::geometry_like: {
      // Five levels: background, two rectangles, a disk, and a small square
      // (the small-area phase the segmentation comparison cares about).
      Image img(width, height, 0.05);
      paint_rect(img, 0.08, 0.42, 0.08, 0.45, 0.30);
      paint_ellipse(img, 0.28, 0.72, 0.16, 0.16, 0.55);
      paint_rect(img, 0.55, 0.92, 0.10, 0.50, 0.78);
      paint_rect(img, 0.62, 0.81, 0.60, 0.79, 0.95);
      return img;
    }
    case TestImageKind::phantom_like: {
      // Six levels: nested ellipses with inclusions.
      Image img(width, height, 0.0);
      paint_ellipse(img, 0.50, 0.50, 0.42, 0.34, 0.20);
      paint_ellipse(img, 0.50, 0.50, 0.30, 0.22, 0.45);
      paint_ellipse(img, 0.38, 0.50, 0.07, 0.07, 0.70);
      paint_ellipse(img, 0.62, 0.44, 0.06, 0.06, 0.90);
      paint_rect(img, 0.56, 0.66, 0.54, 0.62, 1.00);
      return img;
    }
  }
  throw parameter_error("unknown test image kind");
}

}  // namespace anitv
