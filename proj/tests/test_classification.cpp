#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mixnorm/classification.hpp"
#include "mixnorm/dynamics.hpp"

using namespace mixnorm;

namespace {

SpectrumSeries altered(double a, int steps) {
  SystemSpec s;
  s.kind = SystemKind::altered_baker;
  s.a = a;
  s.b = std::sqrt(1.0 - a * a);
  return evolve(s, cosine_preset(SystemKind::baker), steps);
}

SpectrumSeries baker(int steps) {
  SystemSpec s;
  s.kind = SystemKind::baker;
  return evolve(s, cosine_preset(SystemKind::baker), steps);
}

}  // namespace

TEST(Oracle, MatchesSimulatedEnergies) {
  for (double a : {0.6, 0.8}) {
    const double b = std::sqrt(1.0 - a * a);
    const SpectrumSeries s = altered(a, 60);
    for (double q : {1.0, 2.0}) {
      for (int n : {0, 1, 5, 20, 60}) {
        const FourierField& f = s[std::size_t(n)].field;
        const double e1 = std::norm(f.at({1, 0}));
        double rest = 0.0;
        for (const auto& [k, v] : f.entries())
          if (k.k1 > 1) rest += std::norm(v) * std::pow(double(k.k1), -2.0 * q);
        const AlteredBakerOracle o = altered_baker_oracle(a, b, q, n, 4);
        EXPECT_NEAR(o.E1, e1, 1e-14 * std::max(e1, 1e-300));
        EXPECT_NEAR(o.Egt1, rest, 1e-13 * std::max(rest, 1e-300));
      }
    }
  }
}

TEST(Oracle, ConstantAndBoundary) {
  const AlteredBakerOracle o = altered_baker_oracle(0.8, 0.6, 1.0, 10, 2);
  ASSERT_TRUE(o.c_qa.has_value());
  EXPECT_NEAR(*o.c_qa, 0.36 / 1.56, 1e-15);
  EXPECT_NEAR(*o.c_qa, 0.230769230769, 1e-12);
  // R = 2 covers k = 1, 2, 4
  const double c = 0.36 / 1.56;
  const double cR = 1.0 + c * (1.0 - 1.0 / (0.64 * 0.64 * 16.0));
  EXPECT_NEAR(o.c_Rqa, cR, 1e-14);
  EXPECT_NEAR(o.limit_ratio_sq, cR / (1.0 + c), 1e-14);

  EXPECT_TRUE(altered_baker_boundary(0.5, 1.0));
  EXPECT_FALSE(altered_baker_boundary(0.6, 1.0));
  const double b = std::sqrt(0.75);
  const AlteredBakerOracle edge = altered_baker_oracle(0.5, b, 1.0, 7, 3);
  EXPECT_FALSE(edge.c_qa.has_value());
  EXPECT_NEAR(edge.Egt1, 0.75 * std::pow(0.25, 7) * 7, 1e-17);
  EXPECT_NEAR(edge.c_Rqa, 1.0 + 0.75 * 3, 1e-14);
  EXPECT_DOUBLE_EQ(edge.limit_ratio_sq, 0.0);
  EXPECT_DOUBLE_EQ(altered_baker_oracle(0.4, std::sqrt(0.84), 1.0, 5, 2).limit_ratio_sq, 0.0);
}

TEST(EnergyFraction, BakerLeavesTheBall) {
  const TimeSeriesReal r = energy_fraction_series(baker(6), WavenumberSet::ball(2), 1.0);
  const std::vector<double> want = {1, 1, 0, 0, 0, 0, 0};
  EXPECT_EQ(r.value, want);
  std::ostringstream csv;
  write_fraction_csv(csv, r, 2, 1.0);
  EXPECT_EQ(csv.str().substr(0, 15), "t,ratio,radius,");
}

TEST(EnergyFraction, ApproachesLimit) {
  const TimeSeriesReal r = energy_fraction_series(altered(0.8, 80), WavenumberSet::ball(4), 1.0);
  const AlteredBakerOracle o = altered_baker_oracle(0.8, 0.6, 1.0, 80, 2);
  EXPECT_NEAR(r.value.back(), std::sqrt(o.limit_ratio_sq), 1e-12);
}

TEST(Classify, Verdicts) {
  const RecurrenceReport rec = classify_recurrence(altered(0.8, 60), 1.0);
  EXPECT_EQ(rec.verdict, Verdict::recurrent);
  EXPECT_EQ(rec.samples, 61u);
  EXPECT_EQ(rec.radii.size(), 7u);
  EXPECT_EQ(rec.to_json()["verdict"], "recurrent");
  EXPECT_EQ(classify_recurrence(altered(0.6, 60), 1.0).verdict, Verdict::recurrent);
  EXPECT_EQ(classify_recurrence(altered(0.4, 60), 1.0).verdict, Verdict::transient);
  EXPECT_EQ(classify_recurrence(baker(60), 1.0).verdict, Verdict::transient);
  EXPECT_EQ(classify_recurrence(altered(0.6, 60), 2.0).verdict, Verdict::recurrent);
}

TEST(Classify, TransientInLowerQStaysTransient) {
  // a = 0.4 < 2^-1 but > 2^-2: transient at q = 1, recurrent at q = 2
  const SpectrumSeries s = altered(0.4, 60);
  EXPECT_EQ(classify_recurrence(s, 1.0).verdict, Verdict::transient);
  EXPECT_EQ(classify_recurrence(s, 2.0).verdict, Verdict::recurrent);
  const auto lo = classify_recurrence(s, 1.0);
  const auto hi = classify_recurrence(s, 2.0);
  for (std::size_t i = 0; i < lo.radii.size(); ++i) EXPECT_LE(lo.radii[i].tail_max, hi.radii[i].tail_max + 1e-15);
}

TEST(Classify, RejectsShortHorizonAndBadOptions) {
  try {
    classify_recurrence(baker(5), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientHorizon);
  }
  ClassifyOptions bad;
  bad.tail_fraction = 0.75;
  EXPECT_THROW(classify_recurrence(baker(20), 1.0, bad), Error);
  bad = {};
  bad.radii = {};
  EXPECT_THROW(classify_recurrence(baker(20), 1.0, bad), Error);
}
