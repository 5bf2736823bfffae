#ifndef MIXNORM_SRC_FFT_HPP
#define MIXNORM_SRC_FFT_HPP

#include <complex>

#include <fftw3.h>

namespace mixnorm::detail {

/// Unnormalized in-place FFTW transforms on a row-major N x N (or length-N)
/// complex array. forward applies e^{-2 pi i jk/N}, backward e^{+2 pi i jk/N}.
/// Plans are created once per instance; execution is thread-safe.
class Fft {
 public:
  Fft(int dims, int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int n() const { return n_; }

  void forward(std::complex<double>* data) const { run(full_fwd_, data); }
  void backward(std::complex<double>* data) const { run(full_bwd_, data); }
  // 1-D transforms along the first (slow) or second (fast) index only.
  void forward_axis0(std::complex<double>* data) const { run(axis0_fwd_, data); }
  void backward_axis0(std::complex<double>* data) const { run(axis0_bwd_, data); }
  void forward_axis1(std::complex<double>* data) const { run(axis1_fwd_, data); }
  void backward_axis1(std::complex<double>* data) const { run(axis1_bwd_, data); }

 private:
  static void run(fftw_plan plan, std::complex<double>* data);

  int dims_;
  int n_;
  fftw_plan full_fwd_ = nullptr;
  fftw_plan full_bwd_ = nullptr;
  fftw_plan axis0_fwd_ = nullptr;
  fftw_plan axis0_bwd_ = nullptr;
  fftw_plan axis1_fwd_ = nullptr;
  fftw_plan axis1_bwd_ = nullptr;
};

/// Signed frequency of FFT bin i on an n-point grid, in [-n/2, n/2).
inline long frequency(int i, int n) { return i < n / 2 ? i : i - n; }
/// FFT bin holding frequency k (requires |k| < n).
inline int bin(long k, int n) { return int(k < 0 ? k + n : k); }

}  // namespace mixnorm::detail

#endif
