#ifndef MIXNORM_RATE_FUNCTION_HPP
#define MIXNORM_RATE_FUNCTION_HPP

#include <span>
#include <string>
#include <vector>

#include "mixnorm/errors.hpp"

namespace mixnorm {

/// Ordered (t, value) samples with strictly increasing t and finite values.
struct TimeSeriesReal {
  std::vector<double> t;
  std::vector<double> value;

  TimeSeriesReal() = default;
  TimeSeriesReal(std::vector<double> times, std::vector<double> values);

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
};

/// A strictly positive rate h(t): a closed form or a table sampled on the
/// series times. Tables are only evaluated at their own sample times.
class RateFunction {
 public:
  enum class Form { power, exponential, table };

  /// scale * (t + offset)^exponent
  static RateFunction power(double exponent, double offset = 2.0, double scale = 1.0);
  /// scale * exp(-rate * t)
  static RateFunction exponential(double rate, double scale = 1.0);
  static RateFunction table(TimeSeriesReal samples);

  Form form() const { return form_; }
  double operator()(double t) const;
  TimeSeriesReal sample(std::span<const double> times) const;
  std::string describe() const;

 private:
  RateFunction(Form form, double p1, double p2, double scale, TimeSeriesReal samples)
      : form_(form), p1_(p1), p2_(p2), scale_(scale), samples_(std::move(samples)) {}

  Form form_;
  double p1_;
  double p2_;
  double scale_;
  TimeSeriesReal samples_;
};

}  // namespace mixnorm

#endif
