#ifndef MIXNORM_RATES_HPP
#define MIXNORM_RATES_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixnorm/rate_function.hpp"
#include "mixnorm/series.hpp"

namespace mixnorm {

/// Default share of the horizon treated as the "tail" by every limsup
/// surrogate.
inline constexpr double kDefaultTailFraction = 0.25;

/// Per-sample mix-norm ||f^t||_{H^{-q}}. Empty samples give 0; see
/// degenerate_samples.
TimeSeriesReal mixnorm_series(const SpectrumSeries& series, double q);

/// Indices whose value is exactly zero.
std::vector<std::size_t> degenerate_samples(const TimeSeriesReal& ts);

/// First index of the tail made of the last ceil(tail_fraction * n) samples
/// (at least one).
std::size_t tail_start(std::size_t n, double tail_fraction);

/// Finite-horizon limsup surrogate: max of num/den over the tail of the
/// samples.
double empirical_limsup(const TimeSeriesReal& num, const TimeSeriesReal& den, double tail_fraction);

/// Same surrogate restricted to the first ceil(n/2) samples.
double empirical_limsup_half(const TimeSeriesReal& num, const TimeSeriesReal& den, double tail_fraction);

struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// The whole series minus the initial 25% of samples.
TimeWindow default_fit_window(const TimeSeriesReal& ts);

struct DecayFit {
  double lambda = 0.0;  // value ~ exp(-lambda t)
  double r_squared = 0.0;
  std::size_t points = 0;
  TimeWindow window;
};

/// Least-squares slope of log(value) against t over the window (inclusive).
DecayFit fit_decay_rate(const TimeSeriesReal& ts, TimeWindow window);

/// h = sqrt(rho * mixnorm) pointwise.
TimeSeriesReal geometric_mean_rate(const TimeSeriesReal& rho, const TimeSeriesReal& mixnorm);

enum class RateMode { uniform, asymptotic, translational };

std::string_view to_string(RateMode mode);

struct TauSearch {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
};

struct RateCheck {
  RateMode mode = RateMode::uniform;
  bool passed = false;
  double max_ratio = 0.0;       // max corr / (rate * g_norm) over all samples
  double tail_max = 0.0;        // asymptotic: tail-max of corr / rate
  double tail_max_half = 0.0;   // asymptotic: same on the first half horizon
  std::optional<double> tau;    // translational: smallest admissible shift
};

/// Checks one of the three rate notions for a sampled correlation:
///   uniform       corr(t) <= rate(t) g_norm at every sample;
///   asymptotic    corr / rate has a finite tail-max that does not grow by more
///                 than 3x between the half and the full horizon;
///   translational corr(t) <= rate(t - tau) g_norm for all t > tau, smallest tau
///                 on the search grid.
RateCheck check_rate_definition(const TimeSeriesReal& corr, const RateFunction& rate, double g_norm, RateMode mode,
                                TauSearch tau_search = {}, double tail_fraction = kDefaultTailFraction);

struct CrossQComparison {
  double tail_max_ratio = 0.0;
  double tail_max_half = 0.0;
  bool monotone_ok = false;
  TimeSeriesReal ratio;
};

/// Tail statistics of ||f||_{H^{-q'}} / ||f||_{H^{-q}}, q' > q.
CrossQComparison cross_q_comparison(const SpectrumSeries& series, double q, double q_prime, double tail_fraction);

/// Rate descriptor mini-language, resolved to a table on the series times:
///   pow:p         (t + 2)^p * mixnorm(t)
///   exp:r         exp(-r t) * mixnorm(t)
///   table:<path>  CSV with columns t,value
///   mixnorm       mixnorm(t) (same as pow:0)
///   <desc>*geom   sqrt(<desc>(t) * mixnorm(t))
RateFunction parse_rate_descriptor(const std::string& descriptor, const SpectrumSeries& series, double q);

nlohmann::json to_json(const DecayFit& fit);
nlohmann::json to_json(const RateCheck& check);

}  // namespace mixnorm

#endif
