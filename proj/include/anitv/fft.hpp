#pragma once
// Thin wrapper over FFTW's complex 2-D transforms with a process-wide plan
// cache.  Planning is serialized behind a mutex (the FFTW planner is not
// thread safe); execution uses the new-array interface, which is.  Plans are
// created with FFTW_ESTIMATE so results do not depend on runtime timing, and
// FFTW_UNALIGNED so they accept any caller-provided buffers.

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "image.hpp"

namespace anitv {

class Fft2D {
public:
  Fft2D(int width, int height) : w_(width), h_(height) {
    if (width < 1 || height < 1) throw parameter_error("fft grid dimensions must be positive");
    std::vector<std::complex<double>> a(n()), b(n());
    // fftw_plan_dft_2d takes the slow dimension first: rows = height.
    fwd_ = fftw_plan_dft_2d(h_, w_, cast(a.data()), cast(b.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_2d(h_, w_, cast(a.data()), cast(b.data()), FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) throw error("fftw plan creation failed");
  }
  ~Fft2D() {
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
  }
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int width() const { return w_; }
  int height() const { return h_; }
  std::size_t n() const { return static_cast<std::size_t>(w_) * h_; }

  // Out-of-place, unnormalized in both directions (caller divides by N once).
  void forward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(fwd_, cast(const_cast<std::complex<double>*>(in)), cast(out));
  }
  void backward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(bwd_, cast(const_cast<std::complex<double>*>(in)), cast(out));
  }

private:
  static fftw_complex* cast(std::complex<double>* p) {
    return reinterpret_cast<fftw_complex*>(p);
  }
  int w_, h_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

// Shared plan per grid size; plans live for the life of the process.
inline const Fft2D& fft_for(int width, int height) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Fft2D>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(width, height);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<Fft2D>(width, height)).first;
  return *it->second;
}

inline std::vector<std::complex<double>> fft_image(const Image& x) {
  const Fft2D& f = fft_for(x.width, x.height);
  std::vector<std::complex<double>> in(f.n()), out(f.n());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = x.data[i];
  f.forward(in.data(), out.data());
  return out;
}

// Inverse transform, normalized by N; the imaginary residue is discarded.
inline Image ifft_image_real(const std::vector<std::complex<double>>& spec, int width, int height) {
  const Fft2D& f = fft_for(width, height);
  std::vector<std::complex<double>> out(f.n());
  f.backward(spec.data(), out.data());
  Image img(width, height);
  const double scale = 1.0 / static_cast<double>(f.n());
  for (std::size_t i = 0; i < out.size(); ++i) img.data[i] = out[i].real() * scale;
  return img;
}

}  // namespace anitv
