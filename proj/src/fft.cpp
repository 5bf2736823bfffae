#include "fft.hpp"

#include <mutex>
#include <vector>

namespace mixnorm::detail {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(int dims, int n) : dims_(dims), n_(n) {
  std::lock_guard lock(planner_mutex());
  const int total = dims == 1 ? n : n * n;
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(total));
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (dims == 1) {
    full_fwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
    full_bwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
    return;
  }
  full_fwd_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
  full_bwd_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
  int len[] = {n};
  // axis 0: n transforms of stride n, consecutive transforms offset by 1
  axis0_fwd_ = fftw_plan_many_dft(1, len, n, buf, nullptr, n, 1, buf, nullptr, n, 1, FFTW_FORWARD, flags);
  axis0_bwd_ = fftw_plan_many_dft(1, len, n, buf, nullptr, n, 1, buf, nullptr, n, 1, FFTW_BACKWARD, flags);
  // axis 1: n contiguous rows
  axis1_fwd_ = fftw_plan_many_dft(1, len, n, buf, nullptr, 1, n, buf, nullptr, 1, n, FFTW_FORWARD, flags);
  axis1_bwd_ = fftw_plan_many_dft(1, len, n, buf, nullptr, 1, n, buf, nullptr, 1, n, FFTW_BACKWARD, flags);
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  for (fftw_plan p : {full_fwd_, full_bwd_, axis0_fwd_, axis0_bwd_, axis1_fwd_, axis1_bwd_}) {
    if (p != nullptr) fftw_destroy_plan(p);
  }
}

void Fft::run(fftw_plan plan, std::complex<double>* data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace mixnorm::detail
