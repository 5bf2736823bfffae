#include "mixnorm/sine_flow.hpp"

#include <numbers>

#include "fft.hpp"

namespace mixnorm {

ShearPhases draw_phases(std::mt19937_64& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double u1 = double(rng() >> 11) * 0x1p-53;
  const double u2 = double(rng() >> 11) * 0x1p-53;
  return {two_pi * u1, two_pi * u2};
}

SineFlowSolver::SineFlowSolver(int n, double diffusivity, int substeps, double amplitude)
    : n_(n), diffusivity_(diffusivity), substeps_(substeps), amplitude_(amplitude) {
  if (!is_power_of_two(n) || n < 4) throw Error(ErrorCode::GridTooSmall, "sine flow grid must be a power of two >= 4");
  if (!(diffusivity >= 0.0)) throw Error(ErrorCode::NegativeDiffusivity, "diffusivity must be >= 0");
  if (substeps < 1) throw Error(ErrorCode::ParameterConstraintViolated, "need at least one substep");
  fft_ = std::make_unique<detail::Fft>(2, n);
  state_.assign(std::size_t(n) * n, complex{});
  heat_half_.resize(state_.size());
  const double dt = 0.5 / substeps;
  const double c = diffusivity * 4.0 * std::numbers::pi * std::numbers::pi * (0.5 * dt);
  for (int i = 0; i < n; ++i) {
    const double kx = double(detail::frequency(i, n));
    for (int j = 0; j < n; ++j) {
      const double ky = double(detail::frequency(j, n));
      heat_half_[std::size_t(i) * n + j] = std::exp(-c * (kx * kx + ky * ky));
    }
  }
}

SineFlowSolver::~SineFlowSolver() = default;

void SineFlowSolver::load(const FourierField& f) {
  if (f.dims() != 2) throw Error(ErrorCode::DimensionMismatch, "sine flow needs a two-dimensional field");
  if (2 * f.max_component() >= n_)
    throw Error(ErrorCode::GridTooSmall, "grid of " + std::to_string(n_) + " cannot hold |k| = " +
                                             to_string(f.max_component()));
  std::fill(state_.begin(), state_.end(), complex{});
  auto deposit = [&](const Wavevector& k, complex v) {
    state_[std::size_t(detail::bin(long(k.k1), n_)) * n_ + detail::bin(long(k.k2), n_)] += v;
  };
  for (const auto& [k, v] : f.entries()) {
    deposit(k, v);
    if (f.symmetry() == Symmetry::one_sided) deposit(-k, std::conj(v));
  }
  clear_unresolved();
}

void SineFlowSolver::load(const Grid& grid) {
  if (grid.dims != 2 || grid.n != n_) throw Error(ErrorCode::DimensionMismatch, "grid does not match the solver");
  state_ = grid.values;
  fft_->forward(state_.data());
  const double scale = 1.0 / double(state_.size());
  for (auto& v : state_) v *= scale;
  clear_unresolved();
}

FourierField SineFlowSolver::spectrum(double drop_below) const {
  FourierField::Entries entries;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const complex v = state_[std::size_t(i) * n_ + j];
      if (v == complex{} || std::abs(v) <= drop_below) continue;
      entries.emplace(Wavevector{detail::frequency(i, n_), detail::frequency(j, n_)}, v);
    }
  }
  return FourierField(2, Symmetry::full_lattice, std::move(entries));
}

Grid SineFlowSolver::grid() const {
  Grid g{2, n_, state_};
  fft_->backward(g.values.data());
  return g;
}

double SineFlowSolver::l2_norm() const {
  double sum = 0.0;
  for (const auto& v : state_) sum += std::norm(v);
  return std::sqrt(sum);
}

void SineFlowSolver::clear_unresolved() {
  const int nyq = n_ / 2;
  state_[0] = 0.0;
  for (int m = 0; m < n_; ++m) {
    state_[std::size_t(nyq) * n_ + m] = 0.0;
    state_[std::size_t(m) * n_ + nyq] = 0.0;
  }
}

void SineFlowSolver::diffuse_half_substep() {
  if (diffusivity_ == 0.0) return;
  for (std::size_t idx = 0; idx < state_.size(); ++idx) state_[idx] *= heat_half_[idx];
}

void SineFlowSolver::shear(int axis, double psi) {
  const double dt = 0.5 / substeps_;
  const double two_pi = 2.0 * std::numbers::pi;
  // phase[p * n + m]: position p along the shear-varying axis, frequency bin m across it
  std::vector<complex> phase(state_.size());
  for (int p = 0; p < n_; ++p) {
    const double u = amplitude_ * std::sin(two_pi * double(p) / n_ + psi);
    for (int m = 0; m < n_; ++m) {
      const double k = double(detail::frequency(m, n_));
      phase[std::size_t(p) * n_ + m] = std::polar(1.0, -two_pi * k * u * dt);
    }
  }
  const double scale = 1.0 / n_;
  for (int s = 0; s < substeps_; ++s) {
    diffuse_half_substep();
    if (axis == 0) {
      fft_->backward_axis0(state_.data());
      for (std::size_t idx = 0; idx < state_.size(); ++idx) state_[idx] *= phase[idx] * scale;
      fft_->forward_axis0(state_.data());
    } else {
      fft_->backward_axis1(state_.data());
      for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) state_[std::size_t(i) * n_ + j] *= phase[std::size_t(j) * n_ + i] * scale;
      }
      fft_->forward_axis1(state_.data());
    }
    diffuse_half_substep();
    clear_unresolved();
  }
}

void SineFlowSolver::vertical_half_period(double psi1) { shear(0, psi1); }

void SineFlowSolver::horizontal_half_period(double psi2) { shear(1, psi2); }

Grid sine_flow_period(const Grid& f, double diffusivity, double psi1, double psi2, int substeps) {
  if (f.dims != 2) throw Error(ErrorCode::DimensionMismatch, "sine flow needs a two-dimensional grid");
  SineFlowSolver solver(f.n, diffusivity, substeps);
  solver.load(f);
  solver.period({psi1, psi2});
  return solver.grid();
}

}  // namespace mixnorm
