#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "mixnorm/series.hpp"

using namespace mixnorm;

namespace {

SpectrumSeries sample_series() {
  SpectrumSeries s(1, Symmetry::one_sided, "baker", {{"note", "x"}});
  s.append(0.0, FourierField(1, Symmetry::one_sided, {{{1, 0}, complex(1.0 / 3.0, -0.1)}}));
  s.append(1.0, FourierField(1, Symmetry::one_sided, {{{Wavenumber(1) << 100, 0}, complex(2e-300, 0.0)}}));
  s.append(2.5, FourierField(1, Symmetry::one_sided));
  return s;
}

}  // namespace

TEST(Series, AppendEnforcesOrderAndConvention) {
  SpectrumSeries s(1, Symmetry::one_sided);
  s.append(0.0, FourierField(1, Symmetry::one_sided));
  EXPECT_THROW(s.append(0.0, FourierField(1, Symmetry::one_sided)), Error);
  EXPECT_THROW(s.append(1.0, FourierField(1, Symmetry::full_lattice)), Error);
  EXPECT_THROW(s.append(1.0, FourierField(2, Symmetry::one_sided)), Error);
  s.append(1.0, FourierField(1, Symmetry::one_sided));
  EXPECT_EQ(s.index_of(1.0), 1u);
  EXPECT_THROW(s.index_of(0.5), Error);
}

TEST(Series, NdjsonRoundTripIsExact) {
  const SpectrumSeries s = sample_series();
  std::stringstream buf;
  write_ndjson(buf, s);
  const SpectrumSeries back = read_ndjson(buf);
  ASSERT_EQ(back.size(), s.size());
  EXPECT_EQ(back.system(), "baker");
  EXPECT_EQ(back.params()["note"], "x");
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back[i].t, s[i].t);
    EXPECT_EQ(back[i].field.entries(), s[i].field.entries());
  }
}

TEST(Series, WritesIntegersAndSeventeenDigits) {
  std::stringstream buf;
  write_ndjson(buf, sample_series());
  const std::string text = buf.str();
  EXPECT_NE(text.find("[1267650600228229401496703205376,"), std::string::npos);
  EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);
  EXPECT_NE(text.find("\"coeffs\":[]"), std::string::npos);
}

TEST(Series, ParseErrorsNameTheLine) {
  std::stringstream bad("{\"dims\":1,\"symmetry\":\"one_sided\"}\n{\"t\":0,\"coeffs\":[[1,1,0]]}\n{\"t\":1,\"coeffs\":[\n");
  try {
    read_ndjson(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::stringstream zero("{\"dims\":1,\"symmetry\":\"one_sided\"}\n{\"t\":0,\"coeffs\":[[0,1,0]]}\n");
  EXPECT_THROW(read_ndjson(zero), Error);
  std::stringstream header("{\"dims\":3,\"symmetry\":\"one_sided\"}\n");
  EXPECT_THROW(read_ndjson(header), Error);
  std::stringstream arity("{\"dims\":2,\"symmetry\":\"full_lattice\"}\n{\"t\":0,\"coeffs\":[[1,1,0]]}\n");
  EXPECT_THROW(read_ndjson(arity), Error);
}

TEST(Series, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -2.5}) EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
}
