#pragma once
// Circulant linear operators on a periodic pixel grid.  Blur kernels and the
// forward-difference stencils share one code path: embed the impulse response
// on the grid, take its DFT, and that spectrum diagonalizes the operator.
// apply() runs in the frequency domain; apply_spatial() is the direct sliding
// window kept for desk-scale cross-checks.
//
// Convention: a stencil with taps t(r,c) and center (cr,cc) acts by true
// convolution, y(i,j) = sum_{r,c} t(r,c) * x(i-(r-cr), j-(c-cc)) with
// periodic wrap, so a delta image maps to an unflipped copy of the taps.

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"
#include "image.hpp"
#include "kernel.hpp"

namespace anitv {

class GridOperator {
public:
  GridOperator(const Kernel& k, int width, int height)
      : GridOperator(k.rows, k.cols, k.center_row, k.center_col, k.taps, width, height) {}

  static GridOperator from_stencil(int rows, int cols, int center_row, int center_col,
                                   std::vector<double> taps, int width, int height) {
    return GridOperator(rows, cols, center_row, center_col, std::move(taps), width, height);
  }

  int width() const { return w_; }
  int height() const { return h_; }
  std::size_t n() const { return static_cast<std::size_t>(w_) * h_; }
  const std::vector<std::complex<double>>& spectrum() const { return spectrum_; }

  bool dims_match(const Image& img) const { return img.width == w_ && img.height == h_; }

  // Frequency-domain application (the production path).
  Image apply(const Image& x) const {
    check(x);
    std::vector<std::complex<double>> f = fft_image(x);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= spectrum_[i];
    return ifft_image_real(f, w_, h_);
  }

  // Adjoint = circulant with conjugated spectrum.
  Image apply_adjoint(const Image& x) const {
    check(x);
    std::vector<std::complex<double>> f = fft_image(x);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= std::conj(spectrum_[i]);
    return ifft_image_real(f, w_, h_);
  }

  // Direct periodic convolution; O(N * taps).
  Image apply_spatial(const Image& x) const {
    check(x);
    Image y(w_, h_);
    for (int i = 0; i < h_; ++i)
      for (int j = 0; j < w_; ++j) {
        double acc = 0.0;
        for (int r = 0; r < srows_; ++r)
          for (int c = 0; c < scols_; ++c) {
            double t = staps_[static_cast<std::size_t>(r) * scols_ + c];
            if (t == 0.0) continue;
            int yy = wrap(i - (r - scr_), h_);
            int xx = wrap(j - (c - scc_), w_);
            acc += t * x.at(yy, xx);
          }
        y.at(i, j) = acc;
      }
    return y;
  }

private:
  GridOperator(int rows, int cols, int cr, int cc, std::vector<double> taps, int width, int height)
      : w_(width), h_(height), srows_(rows), scols_(cols), scr_(cr), scc_(cc),
        staps_(std::move(taps)) {
    if (width < 1 || height < 1) throw parameter_error("operator grid dimensions must be positive");
    if (rows < 1 || cols < 1 || cr < 0 || cr >= rows || cc < 0 || cc >= cols)
      throw parameter_error("stencil shape/center invalid");
    if (staps_.size() != static_cast<std::size_t>(rows) * cols)
      throw parameter_error("stencil tap count does not match dimensions");
    // Impulse response: tap (r,c) lands at grid offset (r-cr, c-cc), wrapped.
    Image impulse(w_, h_, 0.0);
    for (int r = 0; r < srows_; ++r)
      for (int c = 0; c < scols_; ++c)
        impulse.at(wrap(r - scr_, h_), wrap(c - scc_, w_)) +=
            staps_[static_cast<std::size_t>(r) * scols_ + c];
    spectrum_ = fft_image(impulse);
  }

  void check(const Image& x) const {
    if (!dims_match(x)) throw shape_error("operator/image dimension mismatch");
  }

  static int wrap(int v, int m) {
    v %= m;
    return v < 0 ? v + m : v;
  }

  int w_, h_;
  int srows_, scols_, scr_, scc_;
  std::vector<double> staps_;
  std::vector<std::complex<double>> spectrum_;
};

inline Image apply_convolution(const Image& img, const GridOperator& op) { return op.apply(img); }

// --- discrete gradient system ----------------------------------------------
// Forward differences with periodic wrap:
//   horiz(y,x) = x(y, x+1 mod w) - x(y, x)
//   vert(y,x)  = x(y+1 mod h, x) - x(y, x)

inline CoefficientField apply_gradient(const Image& x) {
  CoefficientField g(x.width, x.height);
  const int w = x.width, h = x.height;
  for (int y = 0; y < h; ++y)
    for (int xx = 0; xx < w; ++xx) {
      g.horiz(y, xx) = x.at(y, (xx + 1) % w) - x.at(y, xx);
      g.vert(y, xx) = x.at((y + 1) % h, xx) - x.at(y, xx);
    }
  return g;
}

// Exact adjoint of apply_gradient under the Euclidean inner products:
//   (G^T c)(y,x) = c_h(y,x-1) - c_h(y,x) + c_v(y-1,x) - c_v(y,x), periodic.
inline Image gradient_adjoint(const CoefficientField& c) {
  Image out(c.width, c.height);
  const int w = c.width, h = c.height;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      out.at(y, x) = c.horiz(y, (x + w - 1) % w) - c.horiz(y, x) +
                     c.vert((y + h - 1) % h, x) - c.vert(y, x);
    }
  return out;
}

// Difference stencils as circulant operators (used for their spectra).
inline GridOperator horizontal_diff_operator(int width, int height) {
  // y(i,j) = x(i,j+1) - x(i,j): under the convolution convention the +1 tap
  // sits at column offset (c-cc) = -1 and the -1 tap at the center.
  return GridOperator::from_stencil(1, 3, 0, 1, {1.0, -1.0, 0.0}, width, height);
}

inline GridOperator vertical_diff_operator(int width, int height) {
  return GridOperator::from_stencil(3, 1, 1, 0, {1.0, -1.0, 0.0}, width, height);
}

// Per-frequency eigenvalues of sum_i G_i G_i^T, computed from the stencil
// DFTs (one code path with the blur spectra, no hand-derived formula).
inline std::vector<double> gram_spectrum(int width, int height) {
  GridOperator dh = horizontal_diff_operator(width, height);
  GridOperator dv = vertical_diff_operator(width, height);
  std::vector<double> g(dh.n());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = std::norm(dh.spectrum()[i]) + std::norm(dv.spectrum()[i]);
  return g;
}

// The smallest joint eigenvalue |lambda_A|^2 + gram over all frequencies;
// strictly positive iff ker A and ker G^T intersect only at 0.
inline double min_joint_spectrum(const GridOperator& A, const std::vector<double>& gram) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gram.size(); ++i) {
    double v = std::norm(A.spectrum()[i]) + gram[i];
    if (v < best) best = v;
  }
  return best;
}

}  // namespace anitv
