#include "mixnorm/classification.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "mixnorm/rates.hpp"

namespace mixnorm {

TimeSeriesReal energy_fraction_series(const SpectrumSeries& series, const WavenumberSet& modes, double q) {
  if (!(q > 0.0)) throw Error(ErrorCode::PreconditionViolated, "q must be > 0");
  std::vector<double> ratio;
  ratio.reserve(series.size());
  for (const auto& s : series.samples()) {
    const double total = sobolev_norm_sq(s.field, -q);
    if (!(total > 0.0)) throw Error(ErrorCode::DegenerateNorm, fmt::format("zero mix-norm at t = {}", s.t));
    const double inside = sobolev_norm_sq(project(s.field, modes), -q);
    ratio.push_back(std::min(1.0, std::sqrt(inside / total)));
  }
  return TimeSeriesReal(series.times(), std::move(ratio));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::recurrent: return "recurrent";
    case Verdict::transient: return "transient";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

double tail_max_prefix(const std::vector<double>& values, std::size_t n, double tail_fraction) {
  double best = 0.0;
  for (std::size_t i = tail_start(n, tail_fraction); i < n; ++i) best = std::max(best, values[i]);
  return best;
}

}  // namespace

RecurrenceReport classify_recurrence(const SpectrumSeries& series, double q, const ClassifyOptions& options) {
  if (series.size() < 8)
    throw Error(ErrorCode::InsufficientHorizon, fmt::format("{} samples, need at least 8", series.size()));
  if (!(options.tail_fraction > 0.0 && options.tail_fraction <= 0.5))
    throw Error(ErrorCode::PreconditionViolated, "tail fraction must lie in (0, 1/2]");
  if (!(options.threshold > 0.0)) throw Error(ErrorCode::PreconditionViolated, "threshold must be > 0");
  if (options.radii.empty()) throw Error(ErrorCode::PreconditionViolated, "no radii given");

  RecurrenceReport report;
  report.q = q;
  report.tail_fraction = options.tail_fraction;
  report.threshold = options.threshold;
  report.samples = series.size();
  report.horizon = series.back().t;

  const std::size_t n = series.size();
  bool recurrent = false;
  bool transient = true;
  for (Wavenumber radius : options.radii) {
    if (radius < 0) throw Error(ErrorCode::PreconditionViolated, "radii must be >= 0");
    const TimeSeriesReal ratio = energy_fraction_series(series, WavenumberSet::ball(radius), q);
    RadiusStats stats;
    stats.radius = radius;
    stats.tail_max = tail_max_prefix(ratio.value, n, options.tail_fraction);
    stats.tail_max_half = tail_max_prefix(ratio.value, (n + 1) / 2, options.tail_fraction);
    for (std::size_t j = 4; j <= 8; ++j) {
      const std::size_t prefix = (j * n + 7) / 8;
      stats.running_max.push_back(tail_max_prefix(ratio.value, prefix, options.tail_fraction));
    }

    if (stats.tail_max >= options.threshold && stats.tail_max_half >= options.threshold &&
        stats.tail_max_half <= 3.0 * stats.tail_max)
      recurrent = true;
    const bool decays = std::is_sorted(stats.running_max.rbegin(), stats.running_max.rend());
    if (!decays || !(stats.running_max.back() < options.threshold)) transient = false;
    report.radii.push_back(std::move(stats));
  }
  report.verdict = recurrent ? Verdict::recurrent : transient ? Verdict::transient : Verdict::inconclusive;
  return report;
}

nlohmann::json RecurrenceReport::to_json() const {
  nlohmann::json per_radius = nlohmann::json::array();
  for (const auto& r : radii) {
    per_radius.push_back({{"radius", mixnorm::to_string(r.radius)},
                          {"tail_max", r.tail_max},
                          {"tail_max_half", r.tail_max_half},
                          {"running_max", r.running_max}});
  }
  return {{"q", q},
          {"tail_fraction", tail_fraction},
          {"threshold", threshold},
          {"horizon", horizon},
          {"samples", samples},
          {"radii", per_radius},
          {"verdict", std::string(mixnorm::to_string(verdict))}};
}

bool altered_baker_boundary(double a, double q) {
  return std::abs(a - std::exp2(-q)) <= 1e-12 * std::exp2(-q);
}

AlteredBakerOracle altered_baker_oracle(double a, double b, double q, int n, int R) {
  if (std::abs(a * a + b * b - 1.0) > 1e-12)
    throw Error(ErrorCode::ParameterConstraintViolated, fmt::format("a^2 + b^2 = {}, expected 1", a * a + b * b));
  if (!(a > 0.0)) throw Error(ErrorCode::ParameterConstraintViolated, "a must be > 0");
  if (!(q > 0.0) || n < 0 || R < 0) throw Error(ErrorCode::PreconditionViolated, "need q > 0, n >= 0, R >= 0");

  AlteredBakerOracle out;
  const double a2n = std::pow(a, 2.0 * n);
  out.E1 = a2n;
  if (altered_baker_boundary(a, q)) {
    out.Egt1 = b * b * a2n * n;
    out.c_Rqa = 1.0 + b * b * R;
    out.limit_ratio_sq = 0.0;
    return out;
  }
  const double c = b * b / (a * a * std::exp2(2.0 * q) - 1.0);
  out.c_qa = c;
  out.Egt1 = c * (a2n - std::exp2(-2.0 * q * n));
  out.c_Rqa = 1.0 + c * (1.0 - std::pow(a, -2.0 * R) * std::exp2(-2.0 * q * R));
  out.limit_ratio_sq = a > std::exp2(-q) ? out.c_Rqa / (1.0 + c) : 0.0;
  return out;
}

nlohmann::json AlteredBakerOracle::to_json() const {
  nlohmann::json j = {{"E1", E1}, {"Egt1", Egt1}, {"c_Rqa", c_Rqa}, {"limit_ratio_sq", limit_ratio_sq}};
  j["c_qa"] = c_qa ? nlohmann::json(*c_qa) : nlohmann::json(nullptr);
  return j;
}

void write_fraction_csv(std::ostream& out, const TimeSeriesReal& ratio, Wavenumber radius, double q) {
  out << "t,ratio,radius,q\n";
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    out << format_double(ratio.t[i]) << ',' << format_double(ratio.value[i]) << ',' << to_string(radius) << ','
        << format_double(q) << '\n';
  }
}

}  // namespace mixnorm
