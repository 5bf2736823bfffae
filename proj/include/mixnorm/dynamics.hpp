#ifndef MIXNORM_DYNAMICS_HPP
#define MIXNORM_DYNAMICS_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "mixnorm/series.hpp"
#include "mixnorm/spectral.hpp"

namespace mixnorm {

enum class SystemKind { baker, altered_baker, pulsed_diffusion, sine_flow };

std::string_view to_string(SystemKind kind);
SystemKind parse_system_kind(std::string_view name);

/// Parameters of one of the four model dynamics. Fields irrelevant to the
/// chosen kind are ignored.
struct SystemSpec {
  SystemKind kind = SystemKind::baker;
  // altered_baker, pulsed_diffusion: first column (a, b) of the transfer
  // matrix, a^2 + b^2 = 1
  double a = 1.0;
  double b = 0.0;
  double kappa = 0.0;  // pulsed_diffusion
  // sine_flow
  double diffusivity = 1e-5;
  int grid_size = 128;
  int substeps = 8;  // Strang substeps per half period
  std::uint64_t seed = 0;
  double velocity_amplitude = std::sqrt(2.0);

  /// Throws ParameterConstraintViolated / NegativeDiffusivity / GridTooSmall.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Amplitudes below this are removed from sparse coefficient maps.
inline constexpr double kUnderflowCutoff = 1e-300;

/// Baker map action on one-sided 1-D coefficients: f_k moves to 2k.
FourierField baker_step(const FourierField& f);

/// Altered baker action: g_1 = a f_1, g_2 = b f_1, g_{2k} = f_k for k >= 2.
FourierField altered_baker_step(const FourierField& f, double a, double b);

/// gamma_k = exp(-kappa (2 pi k)^2).
double heat_factor(Wavenumber k, double kappa);

/// altered_baker_step followed by per-mode damping by gamma_k.
FourierField pulsed_diffusion_step(const FourierField& f, double a, double b, double kappa);

/// Runs `steps` steps (map systems) or flow periods (sine flow) and returns
/// the samples at t = 0, 1, ..., steps. The sine flow draws fresh phases
/// (psi1, psi2) every period from a generator seeded with spec.seed and
/// records them under params["phases"].
SpectrumSeries evolve(const SystemSpec& spec, const FourierField& f0, int steps);

/// The cosine initial condition: one-sided {1: 1} (= 2 cos 2 pi x) for the
/// coefficient maps, full-lattice sqrt(2) cos 2 pi x for the sine flow.
FourierField cosine_preset(SystemKind kind);

}  // namespace mixnorm

#endif
