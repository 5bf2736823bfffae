#ifndef MIXNORM_SINE_FLOW_HPP
#define MIXNORM_SINE_FLOW_HPP

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "mixnorm/spectral.hpp"

namespace mixnorm {

namespace detail {
class Fft;
}

struct ShearPhases {
  double psi1 = 0.0;
  double psi2 = 0.0;
};

/// Uniform phases on [0, 2 pi) from the top 53 bits of two draws.
ShearPhases draw_phases(std::mt19937_64& rng);

/// Pseudo-spectral advection-diffusion on the unit torus for the random sine
/// flow: a vertical shear sqrt(2)(0, sin(2 pi x + psi1)) for half a period,
/// then a horizontal shear sqrt(2)(sin(2 pi y + psi2), 0).
///
/// Each half period is split into `substeps` Strang steps
///   exp(D dt/2 Laplacian) * shear(dt) * exp(D dt/2 Laplacian).
/// The shear is applied exactly as a phase exp(-2 pi i k_perp u dt) in the
/// mixed (physical along the shear, Fourier across) representation and the
/// heat factor exactly in full Fourier space. The mean and the Nyquist modes
/// are held at zero; content the phase product pushes past the grid is
/// truncated.
class SineFlowSolver {
 public:
  SineFlowSolver(int n, double diffusivity, int substeps, double amplitude = std::sqrt(2.0));
  ~SineFlowSolver();
  SineFlowSolver(const SineFlowSolver&) = delete;
  SineFlowSolver& operator=(const SineFlowSolver&) = delete;

  int n() const { return n_; }

  void load(const FourierField& f);
  void load(const Grid& grid);
  /// Full-lattice spectrum; entries with |f_k| <= drop_below are omitted.
  FourierField spectrum(double drop_below = 0.0) const;
  Grid grid() const;
  /// L2 norm (sum over the full lattice).
  double l2_norm() const;

  void vertical_half_period(double psi1);
  void horizontal_half_period(double psi2);
  void period(const ShearPhases& phases) {
    vertical_half_period(phases.psi1);
    horizontal_half_period(phases.psi2);
  }

 private:
  void diffuse_half_substep();
  void clear_unresolved();
  // axis 0: shear velocity varies along x and moves y; axis 1: the converse
  void shear(int axis, double psi);

  int n_;
  double diffusivity_;
  int substeps_;
  double amplitude_;
  std::unique_ptr<detail::Fft> fft_;
  std::vector<complex> state_;
  std::vector<double> heat_half_;
};

/// One full period applied to a real N x N grid.
Grid sine_flow_period(const Grid& f, double diffusivity, double psi1, double psi2, int substeps);

}  // namespace mixnorm

#endif
