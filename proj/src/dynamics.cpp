#include "mixnorm/dynamics.hpp"

#include <numbers>
#include <random>

#include <fmt/format.h>

#include "mixnorm/sine_flow.hpp"

namespace mixnorm {

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::baker: return "baker";
    case SystemKind::altered_baker: return "altered_baker";
    case SystemKind::pulsed_diffusion: return "pulsed_diffusion";
    case SystemKind::sine_flow: return "sineflow";
  }
  return "unknown";
}

SystemKind parse_system_kind(std::string_view name) {
  if (name == "baker") return SystemKind::baker;
  if (name == "altered_baker" || name == "altered-baker") return SystemKind::altered_baker;
  if (name == "pulsed_diffusion" || name == "pulsed-diffusion") return SystemKind::pulsed_diffusion;
  if (name == "sineflow" || name == "sine_flow") return SystemKind::sine_flow;
  throw Error(ErrorCode::ParameterConstraintViolated, "unknown system '" + std::string(name) + "'");
}

namespace {

void check_unit_column(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a * a + b * b - 1.0) > 1e-12)
    throw Error(ErrorCode::ParameterConstraintViolated, fmt::format("a^2 + b^2 = {} != 1", a * a + b * b));
}

void require_one_sided_1d(const FourierField& f) {
  if (f.dims() != 1 || f.symmetry() != Symmetry::one_sided)
    throw Error(ErrorCode::ConventionMismatch, "coefficient maps act on one-sided one-dimensional fields");
}

Wavenumber doubled(Wavenumber k) {
  if (k > kMaxWavenumber / 2)
    throw Error(ErrorCode::ParameterConstraintViolated, "wavenumber " + to_string(k) + " cannot be doubled exactly");
  return 2 * k;
}

void accumulate(FourierField::Entries& out, Wavenumber k, complex v) {
  out[Wavevector{k, 0}] += v;
}

FourierField finish(FourierField::Entries entries, double cutoff) {
  std::erase_if(entries, [cutoff](const auto& kv) { return std::abs(kv.second) <= cutoff; });
  return FourierField(1, Symmetry::one_sided, std::move(entries));
}

}  // namespace

void SystemSpec::validate() const {
  switch (kind) {
    case SystemKind::baker: return;
    case SystemKind::altered_baker:
    case SystemKind::pulsed_diffusion:
      if (!(a > 0.0 && a <= 1.0) || !(b >= 0.0))
        throw Error(ErrorCode::ParameterConstraintViolated, "need 0 < a <= 1 and b >= 0");
      check_unit_column(a, b);
      if (!(kappa >= 0.0)) throw Error(ErrorCode::NegativeDiffusivity, "kappa must be >= 0");
      return;
    case SystemKind::sine_flow:
      if (!(diffusivity >= 0.0)) throw Error(ErrorCode::NegativeDiffusivity, "D must be >= 0");
      if (!is_power_of_two(grid_size) || grid_size < 4)
        throw Error(ErrorCode::GridTooSmall, "grid size must be a power of two >= 4");
      if (substeps < 1) throw Error(ErrorCode::ParameterConstraintViolated, "substeps must be >= 1");
      return;
  }
}

nlohmann::json SystemSpec::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  switch (kind) {
    case SystemKind::baker: break;
    case SystemKind::pulsed_diffusion: j["kappa"] = kappa; [[fallthrough]];
    case SystemKind::altered_baker:
      j["a"] = a;
      j["b"] = b;
      break;
    case SystemKind::sine_flow:
      j["D"] = diffusivity;
      j["N"] = grid_size;
      j["n_sub"] = substeps;
      j["seed"] = seed;
      j["amplitude"] = velocity_amplitude;
      break;
  }
  return j;
}

FourierField baker_step(const FourierField& f) {
  require_one_sided_1d(f);
  FourierField::Entries out;
  for (const auto& [k, v] : f.entries()) out.emplace_hint(out.end(), Wavevector{doubled(k.k1), 0}, v);
  return FourierField(1, Symmetry::one_sided, std::move(out));
}

FourierField altered_baker_step(const FourierField& f, double a, double b) {
  check_unit_column(a, b);
  require_one_sided_1d(f);
  FourierField::Entries out;
  for (const auto& [k, v] : f.entries()) {
    if (k.k1 == 1) {
      accumulate(out, 1, a * v);
      accumulate(out, 2, b * v);
    } else {
      accumulate(out, doubled(k.k1), v);
    }
  }
  return finish(std::move(out), 0.0);
}

double heat_factor(Wavenumber k, double kappa) {
  if (kappa == 0.0) return 1.0;
  const double w = 2.0 * std::numbers::pi * double(k);
  return std::exp(-kappa * w * w);
}

FourierField pulsed_diffusion_step(const FourierField& f, double a, double b, double kappa) {
  if (!(kappa >= 0.0)) throw Error(ErrorCode::NegativeDiffusivity, "kappa must be >= 0");
  FourierField moved = altered_baker_step(f, a, b);
  if (kappa == 0.0) return moved;
  FourierField::Entries out;
  for (const auto& [k, v] : moved.entries()) out.emplace_hint(out.end(), k, v * heat_factor(k.k1, kappa));
  return finish(std::move(out), kUnderflowCutoff);
}

FourierField cosine_preset(SystemKind kind) {
  if (kind == SystemKind::sine_flow) {
    const complex half_root2{std::sqrt(2.0) / 2.0, 0.0};
    return FourierField(2, Symmetry::full_lattice, {{Wavevector{-1, 0}, half_root2}, {Wavevector{1, 0}, half_root2}});
  }
  return FourierField(1, Symmetry::one_sided, {{Wavevector{1, 0}, complex{1.0, 0.0}}});
}

namespace {

SpectrumSeries evolve_sine_flow(const SystemSpec& spec, const FourierField& f0, int steps) {
  if (f0.dims() != 2 || f0.symmetry() != Symmetry::full_lattice)
    throw Error(ErrorCode::ConventionMismatch, "sine flow evolves full-lattice two-dimensional fields");
  SpectrumSeries series(2, Symmetry::full_lattice, std::string(to_string(spec.kind)), spec.to_json());
  SineFlowSolver solver(spec.grid_size, spec.diffusivity, spec.substeps, spec.velocity_amplitude);
  solver.load(f0);
  series.append(0.0, solver.spectrum());
  std::mt19937_64 rng(spec.seed);
  nlohmann::json phases = nlohmann::json::array();
  for (int p = 1; p <= steps; ++p) {
    const ShearPhases psi = draw_phases(rng);
    phases.push_back({psi.psi1, psi.psi2});
    solver.period(psi);
    series.append(double(p), solver.spectrum());
  }
  series.params()["phases"] = std::move(phases);
  return series;
}

}  // namespace

SpectrumSeries evolve(const SystemSpec& spec, const FourierField& f0, int steps) {
  spec.validate();
  if (steps < 0) throw Error(ErrorCode::PreconditionViolated, "steps must be >= 0");
  if (spec.kind == SystemKind::sine_flow) return evolve_sine_flow(spec, f0, steps);

  require_one_sided_1d(f0);
  SpectrumSeries series(1, Symmetry::one_sided, std::string(to_string(spec.kind)), spec.to_json());
  series.append(0.0, f0);
  FourierField f = f0;
  for (int n = 1; n <= steps; ++n) {
    switch (spec.kind) {
      case SystemKind::baker: f = baker_step(f); break;
      case SystemKind::altered_baker: f = altered_baker_step(f, spec.a, spec.b); break;
      case SystemKind::pulsed_diffusion: f = pulsed_diffusion_step(f, spec.a, spec.b, spec.kappa); break;
      case SystemKind::sine_flow: break;
    }
    series.append(double(n), f);
  }
  return series;
}

}  // namespace mixnorm
