#ifndef MIXNORM_CLASSIFICATION_HPP
#define MIXNORM_CLASSIFICATION_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixnorm/rate_function.hpp"
#include "mixnorm/series.hpp"

namespace mixnorm {

/// ratio(t) = ||P_I f^t||_{H^{-q}} / ||f^t||_{H^{-q}}.
TimeSeriesReal energy_fraction_series(const SpectrumSeries& series, const WavenumberSet& modes, double q);

enum class Verdict { recurrent, transient, inconclusive };

std::string_view to_string(Verdict v);

struct RadiusStats {
  Wavenumber radius = 0;
  double tail_max = 0.0;       // over the full horizon
  double tail_max_half = 0.0;  // over the first half of the horizon
  // tail-max over growing prefixes of the horizon (4/8, 5/8, ..., 8/8)
  std::vector<double> running_max;
};

struct RecurrenceReport {
  double q = 0.0;
  double tail_fraction = 0.0;
  double threshold = 0.0;
  double horizon = 0.0;
  std::size_t samples = 0;
  std::vector<RadiusStats> radii;
  Verdict verdict = Verdict::inconclusive;

  nlohmann::json to_json() const;
};

struct ClassifyOptions {
  std::vector<Wavenumber> radii = {1, 2, 4, 8, 16, 32, 64};
  double tail_fraction = 0.25;
  double threshold = 1e-3;
};

/// Finite-horizon surrogate for q-recurrence with balls |k| <= R as the
/// finite mode sets.
///
/// recurrent:  some radius has tail-max >= threshold on both the full and the
///             half horizon, and the half-horizon value is at most 3x the
///             full one;
/// transient:  for every radius the running tail-max never increases over
///             the prefixes and ends below threshold;
/// otherwise inconclusive.
RecurrenceReport classify_recurrence(const SpectrumSeries& series, double q, const ClassifyOptions& options = {});

struct AlteredBakerOracle {
  double E1 = 0.0;
  double Egt1 = 0.0;
  std::optional<double> c_qa;  // none at the boundary a = 2^{-q}
  double c_Rqa = 0.0;
  double limit_ratio_sq = 0.0;

  nlohmann::json to_json() const;
};

/// Closed forms for the altered baker started from the cosine preset:
/// E1 = weighted energy of mode 1 and Egt1 of all modes k > 1 after n steps,
/// and the n -> infinity limit of the squared energy fraction inside the
/// ball of radius 2^R.
AlteredBakerOracle altered_baker_oracle(double a, double b, double q, int n, int R);

/// Boundary test a == 2^{-q} with a relative tolerance.
bool altered_baker_boundary(double a, double q);

/// CSV with columns t,ratio,radius,q.
void write_fraction_csv(std::ostream& out, const TimeSeriesReal& ratio, Wavenumber radius, double q);

}  // namespace mixnorm

#endif
