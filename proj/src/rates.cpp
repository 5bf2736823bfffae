#include "mixnorm/rates.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace mixnorm {

TimeSeriesReal mixnorm_series(const SpectrumSeries& series, double q) {
  if (!(q > 0.0)) throw Error(ErrorCode::PreconditionViolated, "q must be > 0");
  std::vector<double> values;
  values.reserve(series.size());
  for (const auto& s : series.samples()) values.push_back(sobolev_norm(s.field, -q));
  return TimeSeriesReal(series.times(), std::move(values));
}

std::vector<std::size_t> degenerate_samples(const TimeSeriesReal& ts) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts.value[i] == 0.0) out.push_back(i);
  }
  return out;
}

std::size_t tail_start(std::size_t n, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw Error(ErrorCode::PreconditionViolated, "tail fraction must lie in (0, 1]");
  if (n == 0) return 0;
  const auto len = std::max<std::size_t>(1, std::size_t(std::ceil(tail_fraction * double(n) - 1e-12)));
  return n - std::min(len, n);
}

namespace {

void require_aligned(const TimeSeriesReal& a, const TimeSeriesReal& b) {
  if (a.t != b.t) throw Error(ErrorCode::MisalignedSeries, "series are sampled at different times");
}

double tail_max_upto(const TimeSeriesReal& num, const TimeSeriesReal& den, std::size_t n, double tail_fraction) {
  if (n == 0) throw Error(ErrorCode::InsufficientHorizon, "empty series");
  double best = 0.0;
  for (std::size_t i = tail_start(n, tail_fraction); i < n; ++i) {
    if (!(den.value[i] > 0.0)) throw Error(ErrorCode::DegenerateDenominator, fmt::format("denominator 0 at t = {}", den.t[i]));
    best = std::max(best, num.value[i] / den.value[i]);
  }
  return best;
}

}  // namespace

double empirical_limsup(const TimeSeriesReal& num, const TimeSeriesReal& den, double tail_fraction) {
  require_aligned(num, den);
  return tail_max_upto(num, den, num.size(), tail_fraction);
}

double empirical_limsup_half(const TimeSeriesReal& num, const TimeSeriesReal& den, double tail_fraction) {
  require_aligned(num, den);
  return tail_max_upto(num, den, (num.size() + 1) / 2, tail_fraction);
}

TimeWindow default_fit_window(const TimeSeriesReal& ts) {
  if (ts.empty()) throw Error(ErrorCode::WindowTooSmall, "empty series");
  const std::size_t skip = ts.size() / 4;
  return {ts.t[skip], ts.t.back()};
}

DecayFit fit_decay_rate(const TimeSeriesReal& ts, TimeWindow window) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts.t[i] < window.lo || ts.t[i] > window.hi) continue;
    if (!(ts.value[i] > 0.0))
      throw Error(ErrorCode::NonPositiveValues, fmt::format("value {} at t = {}", ts.value[i], ts.t[i]));
    x.push_back(ts.t[i]);
    y.push_back(std::log(ts.value[i]));
  }
  if (x.size() < 4) throw Error(ErrorCode::WindowTooSmall, fmt::format("{} points in window, need 4", x.size()));
  const double n = double(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ss_res += r * r;
  }
  // a constant series fits exactly with zero spread
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {-slope, r2, x.size(), window};
}

TimeSeriesReal geometric_mean_rate(const TimeSeriesReal& rho, const TimeSeriesReal& mixnorm) {
  require_aligned(rho, mixnorm);
  std::vector<double> h(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho.value[i] > 0.0) || !(mixnorm.value[i] > 0.0))
      throw Error(ErrorCode::NonPositiveValues, fmt::format("geometric mean needs positive inputs at t = {}", rho.t[i]));
    h[i] = std::sqrt(rho.value[i] * mixnorm.value[i]);
  }
  return TimeSeriesReal(rho.t, std::move(h));
}

std::string_view to_string(RateMode mode) {
  switch (mode) {
    case RateMode::uniform: return "uniform";
    case RateMode::asymptotic: return "asymptotic";
    case RateMode::translational: return "translational";
  }
  return "unknown";
}

RateCheck check_rate_definition(const TimeSeriesReal& corr, const RateFunction& rate, double g_norm, RateMode mode,
                                TauSearch tau_search, double tail_fraction) {
  constexpr double slack = 1e-12;
  RateCheck out;
  out.mode = mode;
  if (corr.empty()) throw Error(ErrorCode::InsufficientHorizon, "empty correlation series");
  const TimeSeriesReal r = rate.sample(corr.t);
  for (std::size_t i = 0; i < corr.size(); ++i) out.max_ratio = std::max(out.max_ratio, corr.value[i] / (r.value[i] * g_norm));

  switch (mode) {
    case RateMode::uniform:
      out.passed = out.max_ratio <= 1.0 + slack;
      break;
    case RateMode::asymptotic: {
      out.tail_max = empirical_limsup(corr, r, tail_fraction);
      out.tail_max_half = empirical_limsup_half(corr, r, tail_fraction);
      out.passed = std::isfinite(out.tail_max) && out.tail_max <= 3.0 * out.tail_max_half;
      break;
    }
    case RateMode::translational: {
      if (!(tau_search.step > 0.0) || tau_search.hi < tau_search.lo)
        throw Error(ErrorCode::PreconditionViolated, "tau search needs lo <= hi and step > 0");
      const auto count = std::size_t(std::floor((tau_search.hi - tau_search.lo) / tau_search.step + 1e-9)) + 1;
      for (std::size_t m = 0; m < count && !out.passed; ++m) {
        const double tau = tau_search.lo + double(m) * tau_search.step;
        bool ok = true;
        for (std::size_t i = 0; i < corr.size() && ok; ++i) {
          if (!(corr.t[i] > tau)) continue;
          ok = corr.value[i] <= rate(corr.t[i] - tau) * g_norm * (1.0 + slack);
        }
        if (ok) {
          out.passed = true;
          out.tau = tau;
        }
      }
      break;
    }
  }
  return out;
}

CrossQComparison cross_q_comparison(const SpectrumSeries& series, double q, double q_prime, double tail_fraction) {
  if (!(q_prime > q && q > 0.0)) throw Error(ErrorCode::PreconditionViolated, "need q' > q > 0");
  const TimeSeriesReal low = mixnorm_series(series, q);
  const TimeSeriesReal high = mixnorm_series(series, q_prime);
  CrossQComparison out;
  out.monotone_ok = true;
  std::vector<double> ratio(low.size());
  for (std::size_t i = 0; i < low.size(); ++i) {
    if (!(low.value[i] > 0.0))
      throw Error(ErrorCode::DegenerateNorm, fmt::format("zero mix-norm at t = {}", low.t[i]));
    ratio[i] = high.value[i] / low.value[i];
    if (ratio[i] > 1.0 + 1e-12) out.monotone_ok = false;
  }
  out.ratio = TimeSeriesReal(low.t, std::move(ratio));
  out.tail_max_ratio = empirical_limsup(high, low, tail_fraction);
  out.tail_max_half = empirical_limsup_half(high, low, tail_fraction);
  return out;
}

namespace {

double parse_number(const std::string& text, const std::string& descriptor) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError, "bad number in rate descriptor '" + descriptor + "'");
}

TimeSeriesReal read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open rate table " + path);
  std::vector<double> t;
  std::vector<double> v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::ParseError, fmt::format("{}:{}: expected t,value", path, line_no));
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    if (line_no == 1 && (a == "t" || a == "\"t\"")) continue;
    t.push_back(parse_number(a, path));
    v.push_back(parse_number(b, path));
  }
  return TimeSeriesReal(std::move(t), std::move(v));
}

}  // namespace

RateFunction parse_rate_descriptor(const std::string& descriptor, const SpectrumSeries& series, double q) {
  std::string base = descriptor;
  bool geometric = false;
  const std::string suffix = "*geom";
  if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
    geometric = true;
    base.resize(base.size() - suffix.size());
  }
  const TimeSeriesReal mixnorm = mixnorm_series(series, q);
  std::vector<double> values(mixnorm.size());
  if (base == "mixnorm") {
    values = mixnorm.value;
  } else if (base.rfind("pow:", 0) == 0) {
    const double p = parse_number(base.substr(4), descriptor);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::pow(mixnorm.t[i] + 2.0, p) * mixnorm.value[i];
  } else if (base.rfind("exp:", 0) == 0) {
    const double r = parse_number(base.substr(4), descriptor);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::exp(-r * mixnorm.t[i]) * mixnorm.value[i];
  } else if (base.rfind("table:", 0) == 0) {
    const RateFunction table = RateFunction::table(read_table_csv(base.substr(6)));
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = table(mixnorm.t[i]);
  } else {
    throw Error(ErrorCode::ParseError, "unknown rate descriptor '" + descriptor + "'");
  }
  TimeSeriesReal h(mixnorm.t, std::move(values));
  if (geometric) h = geometric_mean_rate(h, mixnorm);
  return RateFunction::table(std::move(h));
}

nlohmann::json to_json(const DecayFit& fit) {
  return {{"lambda", fit.lambda},
          {"r_squared", fit.r_squared},
          {"points", fit.points},
          {"window", {fit.window.lo, fit.window.hi}}};
}

nlohmann::json to_json(const RateCheck& check) {
  nlohmann::json j = {{"mode", std::string(to_string(check.mode))},
                      {"passed", check.passed},
                      {"max_ratio", check.max_ratio}};
  if (check.mode == RateMode::asymptotic) {
    j["tail_max"] = check.tail_max;
    j["tail_max_half"] = check.tail_max_half;
  }
  if (check.tau) j["tau"] = *check.tau;
  return j;
}

}  // namespace mixnorm
