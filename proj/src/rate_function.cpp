#include "mixnorm/rate_function.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace mixnorm {

TimeSeriesReal::TimeSeriesReal(std::vector<double> times, std::vector<double> values)
    : t(std::move(times)), value(std::move(values)) {
  if (t.size() != value.size()) throw Error(ErrorCode::MisalignedSeries, "times and values differ in length");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(value[i]))
      throw Error(ErrorCode::PreconditionViolated, fmt::format("non-finite sample at index {}", i));
    if (i > 0 && !(t[i] > t[i - 1])) throw Error(ErrorCode::PreconditionViolated, "times must increase strictly");
  }
}

RateFunction RateFunction::power(double exponent, double offset, double scale) {
  if (!(scale > 0.0) || !std::isfinite(exponent) || !std::isfinite(offset))
    throw Error(ErrorCode::PreconditionViolated, "power rate needs finite parameters and scale > 0");
  return RateFunction(Form::power, exponent, offset, scale, {});
}

RateFunction RateFunction::exponential(double rate, double scale) {
  if (!(scale > 0.0) || !std::isfinite(rate))
    throw Error(ErrorCode::PreconditionViolated, "exponential rate needs finite parameters and scale > 0");
  return RateFunction(Form::exponential, rate, 0.0, scale, {});
}

RateFunction RateFunction::table(TimeSeriesReal samples) {
  for (double v : samples.value) {
    if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveValues, "rate table must be strictly positive");
  }
  return RateFunction(Form::table, 0.0, 0.0, 1.0, std::move(samples));
}

double RateFunction::operator()(double t) const {
  switch (form_) {
    case Form::power: {
      const double base = t + p2_;
      if (!(base > 0.0)) throw Error(ErrorCode::PreconditionViolated, fmt::format("power rate undefined at t = {}", t));
      return scale_ * std::pow(base, p1_);
    }
    case Form::exponential: return scale_ * std::exp(-p1_ * t);
    case Form::table: {
      const auto it = std::lower_bound(samples_.t.begin(), samples_.t.end(), t);
      if (it == samples_.t.end() || *it != t)
        throw Error(ErrorCode::MisalignedSeries, fmt::format("rate table has no sample at t = {}", t));
      return samples_.value[std::size_t(it - samples_.t.begin())];
    }
  }
  return 0.0;
}

TimeSeriesReal RateFunction::sample(std::span<const double> times) const {
  std::vector<double> values;
  values.reserve(times.size());
  for (double t : times) values.push_back((*this)(t));
  return TimeSeriesReal({times.begin(), times.end()}, std::move(values));
}

std::string RateFunction::describe() const {
  switch (form_) {
    case Form::power: return fmt::format("{} * (t + {})^{}", scale_, p2_, p1_);
    case Form::exponential: return fmt::format("{} * exp(-{} t)", scale_, p1_);
    case Form::table: return fmt::format("table[{} samples]", samples_.size());
  }
  return {};
}

}  // namespace mixnorm
