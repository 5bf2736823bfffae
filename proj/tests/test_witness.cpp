#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mixnorm/dynamics.hpp"
#include "mixnorm/rates.hpp"
#include "mixnorm/witness.hpp"

using namespace mixnorm;

namespace {

SpectrumSeries baker(int steps) {
  SystemSpec s;
  s.kind = SystemKind::baker;
  return evolve(s, cosine_preset(SystemKind::baker), steps);
}

SpectrumSeries constant_series(const FourierField& f, int samples) {
  SpectrumSeries s(f.dims(), f.symmetry());
  for (int i = 0; i < samples; ++i) s.append(i, f);
  return s;
}

// h(t) = r(t) * mixnorm(t) as a table on the series times
RateFunction scaled_mixnorm(const SpectrumSeries& s, double q, const std::vector<double>& r) {
  TimeSeriesReal m = mixnorm_series(s, q);
  for (std::size_t i = 0; i < m.size(); ++i) m.value[i] *= r[std::min(i, r.size() - 1)];
  return RateFunction::table(m);
}

}  // namespace

TEST(Duality, SingleModeSaturates) {
  const FourierField f(1, Symmetry::one_sided, {{{8, 0}, complex(0.0, 2.0)}});
  const WitnessObservable w = duality_witness(f, 1.0);
  EXPECT_NEAR(inner_product(f, w.g).real(), sobolev_norm(f, -1.0), 1e-16);
  EXPECT_NEAR(sobolev_norm(w.g, 1.0), 1.0, 1e-15);
  EXPECT_THROW(duality_witness(FourierField(1, Symmetry::one_sided), 1.0), Error);
}

TEST(Duality, OnSeriesAtChosenTime) {
  const SpectrumSeries s = baker(10);
  const WitnessObservable w = duality_witness(s, 4.0, 1.0);
  ASSERT_EQ(w.selected_times.size(), 1u);
  const VerificationReport v = verify_witness(s, w, 1.0, RateFunction::exponential(0.0));
  EXPECT_TRUE(v.passed);
  EXPECT_NEAR(v.rows[4].corr, 1.0 / 16.0, 1e-16);
  EXPECT_DOUBLE_EQ(v.rows[3].corr, 0.0);
  std::ostringstream csv;
  write_verification_csv(csv, v);
  EXPECT_EQ(csv.str().substr(0, 20), "t,corr,h,mixnorm,pas");
}

TEST(SignState, ConstantComplexMode) {
  const FourierField f(1, Symmetry::one_sided, {{{1, 0}, complex(1.0, 1.0)}});
  const SpectrumSeries s = constant_series(f, 5);
  const WitnessObservable w = sign_state_witness(s, WavenumberSet::ball(1), 1.0, RateFunction::exponential(0.0), 0.3);
  ASSERT_EQ(w.state.size(), 1u);
  EXPECT_EQ(w.state[0].re, 1);
  EXPECT_EQ(w.state[0].im, 1);
  EXPECT_EQ(w.selected_times.size(), 5u);
  const SignStateBounds b = sign_state_bounds(f, w);
  EXPECT_NEAR(b.corr, 2.0, 1e-15);
  EXPECT_NEAR(b.l1_parts, 2.0, 1e-15);
  EXPECT_NEAR(b.l1, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(b.l2, std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(b.chain_holds());
}

TEST(SignState, MajorityAndTieBreak) {
  SpectrumSeries odd(1, Symmetry::one_sided);
  for (int n = 0; n <= 8; ++n) odd.append(n, FourierField(1, Symmetry::one_sided, {{{1, 0}, complex(n % 2 ? -1.0 : 1.0)}}));
  const auto h = RateFunction::exponential(0.0);
  const WitnessObservable w = sign_state_witness(odd, WavenumberSet::ball(1), 1.0, h, 0.5);
  EXPECT_EQ(w.state[0].re, 1);
  EXPECT_EQ(w.state[0].im, 1);  // sign of zero is +1
  EXPECT_EQ(w.selected_times, (std::vector<double>{0, 2, 4, 6, 8}));

  SpectrumSeries even(1, Symmetry::one_sided);
  for (int n = 0; n < 8; ++n) even.append(n, FourierField(1, Symmetry::one_sided, {{{1, 0}, complex(n % 2 ? -1.0 : 1.0)}}));
  const WitnessObservable tie = sign_state_witness(even, WavenumberSet::ball(1), 1.0, h, 0.5);
  EXPECT_EQ(tie.state[0].re, -1);
  EXPECT_EQ(tie.selected_times, (std::vector<double>{1, 3, 5, 7}));
  EXPECT_TRUE(verify_witness(even, tie, 1.0, h).passed);
}

TEST(SignState, NormIdentityAndCap) {
  FourierField::Entries e;
  for (int k = 1; k <= 3; ++k) e[{k, 0}] = complex(0.5, -0.25 * k);
  const SpectrumSeries s = constant_series(FourierField(1, Symmetry::one_sided, e), 3);
  const double q = 1.0;
  const WitnessObservable w = sign_state_witness(s, WavenumberSet::ball(3), q, RateFunction::exponential(0.0), 0.1);
  for (double beta : {0.0, 0.5, 1.0}) {
    double want = 0.0;
    for (int k = 1; k <= 3; ++k) want += 2.0 * std::pow(k, 2.0 * (beta - q));
    EXPECT_NEAR(sobolev_norm_sq(w.g, beta), want, 1e-14);
  }
  try {
    sign_state_witness(s, WavenumberSet::ball(9), q, RateFunction::exponential(0.0), 0.1);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::StateCapExceeded);
  }
  EXPECT_THROW(sign_state_witness(s, WavenumberSet::ball(3), q, RateFunction::exponential(0.0), 100.0), Error);
}

TEST(Shells, BakerShellsDouble) {
  const SpectrumSeries s = baker(8);
  const ShellDecomposition d = shell_decomposition(s, 1.0, scaled_mixnorm(s, 1.0, {0.1}), 0.25, 1.0);
  ASSERT_EQ(d.entries.size(), 9u);
  EXPECT_FALSE(d.horizon_exhausted);
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    EXPECT_EQ(d.entries[i].J, Wavenumber(1) << i);
    EXPECT_DOUBLE_EQ(d.entries[i].T, double(i));
    EXPECT_TRUE(d.entries[i].property1);
  }
  EXPECT_EQ(d.entries[0].J_prev, -1);
  EXPECT_EQ(d.entries[3].J_prev, 4);
}

TEST(Shells, AlteredBakerExhaustsHorizon) {
  SystemSpec spec;
  spec.kind = SystemKind::altered_baker;
  spec.a = 0.8;
  spec.b = 0.6;
  const SpectrumSeries s = evolve(spec, cosine_preset(SystemKind::baker), 30);
  const ShellDecomposition d = shell_decomposition(s, 1.0, scaled_mixnorm(s, 1.0, {0.1}), 0.25, 1.0);
  EXPECT_EQ(d.entries.size(), 1u);
  EXPECT_TRUE(d.horizon_exhausted);
  EXPECT_EQ(d.to_json()["horizon_exhausted"], true);
}

TEST(Shells, RejectsBadArguments) {
  const SpectrumSeries s = baker(5);
  const auto h = scaled_mixnorm(s, 1.0, {0.1});
  EXPECT_THROW(shell_decomposition(s, 1.0, h, 1.0, 1.0), Error);
  EXPECT_THROW(shell_decomposition(s, 1.0, scaled_mixnorm(s, 1.0, {2.0}), 0.25, 1.0), Error);
  EXPECT_NEAR(rate_bound_constant(s, 1.0, h), 0.1, 1e-15);
}

TEST(Transient, BakerWithThreeScales) {
  const SpectrumSeries s = baker(6);
  const double q = 1.0;
  const double delta = 0.25;
  const RateFunction h = scaled_mixnorm(s, q, {0.1, 1e-3, 1e-5, 1e-5});
  const ShellDecomposition d = shell_decomposition(s, q, h, delta, 1.0);
  const WitnessObservable w = transient_witness(s, d, q, h, delta);
  ASSERT_EQ(w.selected_times, (std::vector<double>{0, 1, 2}));
  for (const auto& term : w.terms) {
    EXPECT_NEAR(term.pairing / term.h, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(std::abs(term.E1), 0.0);
    EXPECT_DOUBLE_EQ(std::abs(term.E2), 0.0);
  }
  EXPECT_NEAR(sobolev_norm_sq(w.g, q), 0.01 + 1e-6 + 1e-10, 1e-15);
  EXPECT_LE(sobolev_norm_sq(w.g, q), delta * delta);
  EXPECT_TRUE(verify_witness(s, w, q, h).passed);
  EXPECT_EQ(w.metadata()["mode"], "transient");
}

TEST(Transient, NeedsSmallRatio) {
  const SpectrumSeries s = baker(10);
  const RateFunction h = scaled_mixnorm(s, 1.0, {1.0});
  const ShellDecomposition d = shell_decomposition(s, 1.0, h, 0.25, 1.0);
  try {
    transient_witness(s, d, 1.0, h, 0.25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SubsequenceUnavailable);
  }
  EXPECT_THROW(transient_witness(s, d, 1.0, h, 0.4), Error);
}

TEST(Verify, RejectsEmptyObservableAndMismatch) {
  const SpectrumSeries s = baker(4);
  WitnessObservable w;
  w.selected_times = {0.0};
  EXPECT_FALSE(verify_witness(s, w, 1.0, RateFunction::exponential(0.0)).passed);
  w.g = FourierField(2, Symmetry::full_lattice, {{{1, 0}, complex(1.0)}});
  try {
    verify_witness(s, w, 1.0, RateFunction::exponential(0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConventionMismatch);
  }
}
