#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mixnorm/dynamics.hpp"
#include "mixnorm/sine_flow.hpp"

using namespace mixnorm;

namespace {

constexpr double kPi = std::numbers::pi;

SystemSpec map_spec(SystemKind kind, double a = 1.0, double b = 0.0, double kappa = 0.0) {
  SystemSpec s;
  s.kind = kind;
  s.a = a;
  s.b = b;
  s.kappa = kappa;
  return s;
}

}  // namespace

TEST(Baker, DoublesTheWavenumber) {
  const SpectrumSeries s = evolve(map_spec(SystemKind::baker), cosine_preset(SystemKind::baker), 20);
  ASSERT_EQ(s.size(), 21u);
  const auto& last = s.back().field;
  ASSERT_EQ(last.size(), 1u);
  EXPECT_EQ(last.entries().begin()->first, (Wavevector{Wavenumber(1) << 20, 0}));
  EXPECT_EQ(last.entries().begin()->second, complex(1.0));
  for (std::size_t n = 0; n < s.size(); ++n) EXPECT_DOUBLE_EQ(sobolev_norm(s[n].field, -1.0), std::exp2(-double(n)));
}

TEST(Baker, ReachesOneHundredSteps) {
  const SpectrumSeries s = evolve(map_spec(SystemKind::baker), cosine_preset(SystemKind::baker), 100);
  EXPECT_EQ(s.back().field.max_component(), Wavenumber(1) << 100);
}

TEST(AlteredBaker, FollowsTableRows) {
  const double a = 0.8;
  const double b = 0.6;
  const SpectrumSeries s = evolve(map_spec(SystemKind::altered_baker, a, b), cosine_preset(SystemKind::baker), 6);
  for (int n = 0; n <= 6; ++n) {
    const auto& f = s[std::size_t(n)].field;
    ASSERT_EQ(f.size(), std::size_t(n + 1));
    EXPECT_NEAR(f.at({1, 0}).real(), std::pow(a, n), 1e-15);
    for (int l = 1; l <= n; ++l) EXPECT_NEAR(f.at({Wavenumber(1) << l, 0}).real(), std::pow(a, n - l) * b, 1e-15);
  }
}

TEST(AlteredBaker, StepOnGenericField) {
  // modes 1 and 3: 1 -> a at 1 and b at 2, 3 -> 6
  FourierField f(1, Symmetry::one_sided, {{{1, 0}, complex(2.0, 1.0)}, {{3, 0}, complex(0.0, -1.0)}});
  const FourierField g = altered_baker_step(f, 0.6, 0.8);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.at({1, 0}), complex(1.2, 0.6));
  EXPECT_EQ(g.at({2, 0}), complex(1.6, 0.8));
  EXPECT_EQ(g.at({6, 0}), complex(0.0, -1.0));
  // a = 1, b = 0 drops the exact zero at k = 2
  EXPECT_EQ(altered_baker_step(f, 1.0, 0.0).size(), 2u);
}

TEST(AlteredBaker, RejectsNonUnitColumn) {
  try {
    evolve(map_spec(SystemKind::altered_baker, 0.8, 0.8), cosine_preset(SystemKind::baker), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParameterConstraintViolated);
  }
}

TEST(PulsedDiffusion, FollowsSecondTable) {
  const double a = std::sqrt(0.5);
  const double b = std::sqrt(0.5);
  const double kappa = 1e-3;
  auto gamma = [&](double k) { return std::exp(-kappa * std::pow(2 * kPi * k, 2)); };
  const SpectrumSeries s =
      evolve(map_spec(SystemKind::pulsed_diffusion, a, b, kappa), cosine_preset(SystemKind::baker), 3);
  const auto& f3 = s[3].field;
  EXPECT_NEAR(f3.at({1, 0}).real(), std::pow(a * gamma(1), 3), 1e-16);
  EXPECT_NEAR(f3.at({2, 0}).real(), std::pow(a * gamma(1), 2) * b * gamma(2), 1e-16);
  EXPECT_NEAR(f3.at({4, 0}).real(), a * gamma(1) * b * gamma(2) * gamma(4), 1e-16);
  EXPECT_NEAR(f3.at({8, 0}).real(), b * gamma(2) * gamma(4) * gamma(8), 1e-16);
  EXPECT_DOUBLE_EQ(heat_factor(3, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(heat_factor(3, kappa), gamma(3));
}

TEST(PulsedDiffusion, DropsUnderflowedModes) {
  const SpectrumSeries s =
      evolve(map_spec(SystemKind::pulsed_diffusion, 0.8, 0.6, 1e-3), cosine_preset(SystemKind::baker), 30);
  for (const auto& smp : s.samples()) {
    for (const auto& [k, v] : smp.field.entries()) EXPECT_GT(std::abs(v), kUnderflowCutoff);
  }
  EXPECT_LT(s.back().field.size(), 31u);
  EXPECT_THROW(pulsed_diffusion_step(cosine_preset(SystemKind::baker), 0.8, 0.6, -1.0), Error);
}

TEST(SystemKind, NamesRoundTrip) {
  for (auto k : {SystemKind::baker, SystemKind::altered_baker, SystemKind::pulsed_diffusion, SystemKind::sine_flow})
    EXPECT_EQ(parse_system_kind(to_string(k)), k);
  EXPECT_EQ(parse_system_kind("sine_flow"), SystemKind::sine_flow);
  EXPECT_THROW(parse_system_kind("arnold_cat"), Error);
}

TEST(SineFlow, InviscidPeriodMatchesExactSolution) {
  // f0 = sqrt(2) cos(2 pi x) does not depend on y, so the vertical shear leaves
  // it alone and the horizontal one gives f0(x - (sqrt2 / 2) sin(2 pi y + psi2)).
  const int n = 64;
  const double psi1 = 1.1;
  const double psi2 = 0.4;
  SineFlowSolver solver(n, 0.0, 4);
  solver.load(cosine_preset(SystemKind::sine_flow));
  solver.period({psi1, psi2});
  const Grid g = solver.grid();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = double(i) / n;
      const double y = double(j) / n;
      const double shift = std::sqrt(2.0) / 2.0 * std::sin(2 * kPi * y + psi2);
      const double want = std::sqrt(2.0) * std::cos(2 * kPi * (x - shift));
      worst = std::max(worst, std::abs(g.values[g.index(i, j)] - want));
    }
  }
  EXPECT_LT(worst, 1e-11);
}

TEST(SineFlow, PureDiffusionDampsEachMode) {
  const double D = 1e-3;
  SineFlowSolver solver(32, D, 3, 0.0);
  FourierField f(2, Symmetry::full_lattice, {{{2, 1}, complex(1.0, 0.0)}, {{-2, -1}, complex(1.0, 0.0)}});
  solver.load(f);
  solver.period({0.0, 0.0});
  const double expect = std::exp(-D * 4 * kPi * kPi * 5.0);
  const FourierField out = solver.spectrum(1e-14);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_NEAR(out.at({2, 1}).real(), expect, 1e-14);
}

TEST(SineFlow, InviscidFlowConservesL2) {
  SineFlowSolver solver(128, 0.0, 8);
  solver.load(cosine_preset(SystemKind::sine_flow));
  const double before = solver.l2_norm();
  solver.period({0.3, 2.0});
  EXPECT_NEAR(solver.l2_norm(), before, 1e-12);
}

TEST(SineFlow, EvolveIsSeededAndLogsPhases) {
  SystemSpec spec;
  spec.kind = SystemKind::sine_flow;
  spec.grid_size = 32;
  spec.seed = 7;
  const FourierField f0 = cosine_preset(SystemKind::sine_flow);
  const SpectrumSeries a = evolve(spec, f0, 3);
  const SpectrumSeries b = evolve(spec, f0, 3);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a.params()["phases"].size(), 3u);
  EXPECT_EQ(a.params()["phases"], b.params()["phases"]);
  EXPECT_EQ(a.back().field.entries(), b.back().field.entries());
  spec.seed = 8;
  EXPECT_NE(evolve(spec, f0, 3).params()["phases"], a.params()["phases"]);
  for (const auto& p : a.params()["phases"]) {
    for (double psi : p) {
      EXPECT_GE(psi, 0.0);
      EXPECT_LT(psi, 2 * kPi);
    }
  }
  EXPECT_TRUE(a.back().field.is_real(1e-12));
}

TEST(SineFlow, ValidatesParameters) {
  SystemSpec spec;
  spec.kind = SystemKind::sine_flow;
  spec.diffusivity = -1.0;
  EXPECT_THROW(spec.validate(), Error);
  spec.diffusivity = 1e-5;
  spec.grid_size = 100;
  EXPECT_THROW(spec.validate(), Error);
  spec.grid_size = 32;
  EXPECT_THROW(evolve(spec, cosine_preset(SystemKind::baker), 1), Error);
}
