#ifndef MIXNORM_WITNESS_HPP
#define MIXNORM_WITNESS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixnorm/rate_function.hpp"
#include "mixnorm/series.hpp"

namespace mixnorm {

enum class WitnessMode { duality, sign_state, transient };

std::string_view to_string(WitnessMode mode);

/// Quadrant state of one mode: (sgn Re f_k, sgn Im f_k) with sgn(0) = +1.
struct QuadrantSign {
  Wavevector k;
  int re = 1;
  int im = 1;
};

/// Per-time bookkeeping of the transient construction.
struct TransientTerm {
  double t = 0.0;
  std::size_t shell = 0;  // index into ShellDecomposition::entries
  double ratio = 0.0;     // h(T) / mixnorm(T)
  double h = 0.0;
  double pairing = 0.0;   // Re <f^T, g>
  double own = 0.0;       // contribution of the shell selected at T
  complex E1;             // contribution of shells selected before T
  complex E2;             // contribution of shells selected after T
};

struct WitnessObservable {
  FourierField g{1, Symmetry::one_sided};
  WitnessMode mode = WitnessMode::duality;
  double q = 0.0;
  double delta = 0.0;
  double c = 0.0;  // sign_state lower-bound constant
  std::vector<double> selected_times;
  std::string guaranteed_bound;
  std::vector<QuadrantSign> state;    // sign_state only
  std::vector<TransientTerm> terms;   // transient only

  nlohmann::json metadata() const;
};

/// g_k = f_k |k|^{-2q} / ||f||_{H^{-q}}, so that <f, g> = ||f||_{H^{-q}} and
/// ||g||_{H^q} = 1.
WitnessObservable duality_witness(const FourierField& f, double q);
/// Same, built from the sample at time t0 and recorded as its selected time.
WitnessObservable duality_witness(const SpectrumSeries& series, double t0, double q);

inline constexpr std::size_t kDefaultStateCap = 8;

/// Pigeonhole witness on a finite mode set I. Candidate times are those with
/// ||P_I f^t||_{H^{-q}} >= c h(t); the most frequent quadrant state among
/// them (ties to the lexicographically smallest) gives
/// g_k = (c_k + i d_k) |k|^{-q} on I.
WitnessObservable sign_state_witness(const SpectrumSeries& series, const WavenumberSet& modes, double q,
                                     const RateFunction& h, double c, std::size_t state_cap = kDefaultStateCap);

struct SignStateBounds {
  double corr = 0.0;      // |<f, g>|
  double l1_parts = 0.0;  // sum (|Re f_k| + |Im f_k|) |k|^{-q}
  double l1 = 0.0;        // sum |f_k| |k|^{-q}
  double l2 = 0.0;        // (sum |f_k|^2 |k|^{-2q})^{1/2}

  /// corr >= l1_parts >= l1 >= l2, each up to `slack` (relative).
  bool chain_holds(double slack = 1e-12) const;
};

/// Evaluates the lower-bound chain for the sign-state witness at one sample.
SignStateBounds sign_state_bounds(const FourierField& f, const WitnessObservable& w);

struct ShellEntry {
  Wavenumber J_prev = -1;  // -1: the first shell is a full ball
  Wavenumber J = 0;
  double T = 0.0;
  bool property1 = false;  // shell holds >= (1 - delta) of the mix-norm energy at T
  bool property2 = false;  // energy below J_prev stays <= min(delta, delta/c^2) h^2 after T
};

struct ShellDecomposition {
  double delta = 0.0;
  double q = 0.0;
  double c_bound = 0.0;
  double horizon = 0.0;
  std::vector<ShellEntry> entries;
  /// No admissible next time existed although samples remained.
  bool horizon_exhausted = false;

  WavenumberSet shell(std::size_t i) const;
  nlohmann::json to_json() const;
};

/// Smallest constant c with h(t) <= c mixnorm(t) on the series.
double rate_bound_constant(const SpectrumSeries& series, double q, const RateFunction& h);

/// Greedy construction of the shells I_i = {J_{i-1} < |k| <= J_i} and times
/// T_i; Property 2 is checked against every later sample of the series.
ShellDecomposition shell_decomposition(const SpectrumSeries& series, double q, const RateFunction& h, double delta,
                                       double c_bound);

/// Witness for transient series: a subsequence of shells with
/// r = h/mixnorm <= delta/2 first and then r <= (delta^2/2) r_prev, and
/// g_k = f^T_k |k|^{-2q} h(T) / mixnorm(T)^2 on each selected shell.
WitnessObservable transient_witness(const SpectrumSeries& series, const ShellDecomposition& shells, double q,
                                    const RateFunction& h, double delta);

struct VerificationRow {
  double t = 0.0;
  double corr = 0.0;
  double h = 0.0;
  double mixnorm = 0.0;
  std::optional<bool> pass;  // only at selected times
};

struct VerificationReport {
  std::vector<VerificationRow> rows;
  double tail_max = 0.0;  // tail-max of corr / h
  bool passed = false;

  nlohmann::json summary() const;
};

/// Correlations |<f^t, g>| along the series and the check of the witness's
/// guaranteed bound at its selected times.
VerificationReport verify_witness(const SpectrumSeries& series, const WitnessObservable& w, double q,
                                  const RateFunction& h, double tail_fraction = 0.25);

/// CSV with columns t,corr,h,mixnorm,pass (pass empty off the selected times).
void write_verification_csv(std::ostream& out, const VerificationReport& report);

}  // namespace mixnorm

#endif
