#include "mixnorm/witness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "mixnorm/rates.hpp"

namespace mixnorm {

std::string_view to_string(WitnessMode mode) {
  switch (mode) {
    case WitnessMode::duality: return "duality";
    case WitnessMode::sign_state: return "sign_state";
    case WitnessMode::transient: return "transient";
  }
  return "unknown";
}

namespace {

double weight(const Wavevector& k, double alpha) { return std::pow(k.magnitude_sq(), alpha / 2.0); }

nlohmann::json complex_json(complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

nlohmann::json WitnessObservable::metadata() const {
  nlohmann::json j = {{"mode", std::string(to_string(mode))},
                      {"q", q},
                      {"delta", delta},
                      {"selected_times", selected_times},
                      {"guaranteed_bound", guaranteed_bound},
                      {"g_norm_Hq", sobolev_norm(g, q)}};
  if (mode == WitnessMode::sign_state) {
    j["c"] = c;
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : state) {
      nlohmann::json k = g.dims() == 1 ? nlohmann::json::array({to_string(s.k.k1)})
                                       : nlohmann::json::array({to_string(s.k.k1), to_string(s.k.k2)});
      st.push_back({{"k", k}, {"re", s.re}, {"im", s.im}});
    }
    j["state"] = st;
  }
  if (mode == WitnessMode::transient) {
    nlohmann::json terms_json = nlohmann::json::array();
    for (const auto& t : terms) {
      terms_json.push_back({{"t", t.t},
                            {"shell", t.shell},
                            {"ratio", t.ratio},
                            {"h", t.h},
                            {"pairing", t.pairing},
                            {"own", t.own},
                            {"E1", complex_json(t.E1)},
                            {"E2", complex_json(t.E2)}});
    }
    j["terms"] = terms_json;
  }
  return j;
}

WitnessObservable duality_witness(const FourierField& f, double q) {
  if (!(q > 0.0)) throw Error(ErrorCode::PreconditionViolated, "q must be > 0");
  const double m = sobolev_norm(f, -q);
  if (!(m > 0.0)) throw Error(ErrorCode::DegenerateNorm, "field has zero mix-norm");
  FourierField::Entries g;
  for (const auto& [k, v] : f.entries()) g.emplace_hint(g.end(), k, v * (weight(k, -2.0 * q) / m));
  WitnessObservable w;
  w.g = FourierField(f.dims(), f.symmetry(), std::move(g));
  w.mode = WitnessMode::duality;
  w.q = q;
  w.guaranteed_bound = fmt::format("<f, g> = ||f||_H^-{0} at the selected time, ||g||_H^{0} = 1", q);
  return w;
}

WitnessObservable duality_witness(const SpectrumSeries& series, double t0, double q) {
  WitnessObservable w = duality_witness(series[series.index_of(t0)].field, q);
  w.selected_times = {t0};
  return w;
}

WitnessObservable sign_state_witness(const SpectrumSeries& series, const WavenumberSet& modes, double q,
                                     const RateFunction& h, double c, std::size_t state_cap) {
  if (!(q > 0.0) || !(c > 0.0)) throw Error(ErrorCode::PreconditionViolated, "need q > 0 and c > 0");
  const std::vector<Wavevector> ks = modes.enumerate(series.dims(), series.symmetry(), state_cap);
  if (ks.empty()) throw Error(ErrorCode::NoCandidateTimes, "mode set is empty");

  // state vector: 2 signs per mode, -1 < +1 so std::map ordering is lexicographic
  std::map<std::vector<int>, std::vector<double>> seen;
  for (const auto& s : series.samples()) {
    const double inside = sobolev_norm(project(s.field, modes), -q);
    if (inside < c * h(s.t)) continue;
    std::vector<int> st;
    st.reserve(2 * ks.size());
    for (const auto& k : ks) {
      const complex v = s.field.at(k);
      st.push_back(v.real() >= 0.0 ? 1 : -1);
      st.push_back(v.imag() >= 0.0 ? 1 : -1);
    }
    seen[st].push_back(s.t);
  }
  if (seen.empty())
    throw Error(ErrorCode::NoCandidateTimes, fmt::format("no sample has ||P_I f||_H^-{} >= {} h(t)", q, c));

  auto best = seen.begin();
  for (auto it = seen.begin(); it != seen.end(); ++it) {
    if (it->second.size() > best->second.size()) best = it;
  }

  WitnessObservable w;
  w.mode = WitnessMode::sign_state;
  w.q = q;
  w.c = c;
  w.selected_times = best->second;
  FourierField::Entries g;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const int re = best->first[2 * i];
    const int im = best->first[2 * i + 1];
    w.state.push_back({ks[i], re, im});
    g.emplace(ks[i], complex(re, im) * weight(ks[i], -q));
  }
  w.g = FourierField(series.dims(), series.symmetry(), std::move(g));
  w.guaranteed_bound = fmt::format("|<f^t, g>| >= ||P_I f^t||_H^-{} >= {} h(t) at the selected times", q, c);
  return w;
}

bool SignStateBounds::chain_holds(double slack) const {
  auto ge = [slack](double x, double y) { return x >= y - slack * std::max(1.0, std::abs(y)); };
  return ge(corr, l1_parts) && ge(l1_parts, l1) && ge(l1, l2);
}

SignStateBounds sign_state_bounds(const FourierField& f, const WitnessObservable& w) {
  SignStateBounds b;
  b.corr = std::abs(inner_product(f, w.g));
  double l2sq = 0.0;
  for (const auto& s : w.state) {
    const complex v = f.at(s.k);
    const double wk = weight(s.k, -w.q);
    b.l1_parts += (std::abs(v.real()) + std::abs(v.imag())) * wk;
    b.l1 += std::abs(v) * wk;
    l2sq += std::norm(v) * wk * wk;
  }
  b.l2 = std::sqrt(l2sq);
  return b;
}

WavenumberSet ShellDecomposition::shell(std::size_t i) const {
  const auto& e = entries.at(i);
  return e.J_prev < 0 ? WavenumberSet::ball(e.J) : WavenumberSet::annulus(e.J_prev, e.J);
}

nlohmann::json ShellDecomposition::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    list.push_back({{"J_prev", to_string(e.J_prev)},
                    {"J", to_string(e.J)},
                    {"T", e.T},
                    {"property1", e.property1},
                    {"property2", e.property2}});
  }
  return {{"delta", delta},     {"q", q},         {"c_bound", c_bound},
          {"horizon", horizon}, {"entries", list}, {"horizon_exhausted", horizon_exhausted}};
}

double rate_bound_constant(const SpectrumSeries& series, double q, const RateFunction& h) {
  const TimeSeriesReal m = mixnorm_series(series, q);
  double c = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m.value[i] > 0.0)) throw Error(ErrorCode::DegenerateNorm, fmt::format("zero mix-norm at t = {}", m.t[i]));
    c = std::max(c, h(m.t[i]) / m.value[i]);
  }
  return c;
}

namespace {

// Weighted energy sum |k|^{-2q} |f_k|^2 over modes with J_prev < |k| <= J.
double band_energy(const FourierField& f, double q, Wavenumber J_prev, Wavenumber J) {
  double e = 0.0;
  for (const auto& [k, v] : f.entries()) {
    const Wavenumber r = k.ceil_magnitude();
    if (r > J_prev && r <= J) e += std::norm(v) * weight(k, -2.0 * q);
  }
  return e;
}

// Smallest integer J > J_prev with band_energy(J_prev, J) >= target.
std::optional<Wavenumber> smallest_radius(const FourierField& f, double q, Wavenumber J_prev, double target) {
  std::vector<std::pair<Wavenumber, double>> modes;
  for (const auto& [k, v] : f.entries()) {
    const Wavenumber r = k.ceil_magnitude();
    if (r > J_prev) modes.emplace_back(r, std::norm(v) * weight(k, -2.0 * q));
  }
  std::sort(modes.begin(), modes.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  double acc = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    acc += modes[i].second;
    const bool last_of_radius = i + 1 == modes.size() || modes[i + 1].first != modes[i].first;
    if (last_of_radius && acc >= target) return modes[i].first;
  }
  return std::nullopt;
}

}  // namespace

ShellDecomposition shell_decomposition(const SpectrumSeries& series, double q, const RateFunction& h, double delta,
                                       double c_bound) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::PreconditionViolated, "delta must lie in (0, 1)");
  if (!(c_bound > 0.0)) throw Error(ErrorCode::PreconditionViolated, "c_bound must be > 0");
  if (series.empty()) throw Error(ErrorCode::InsufficientHorizon, "empty series");

  const TimeSeriesReal m = mixnorm_series(series, q);
  const std::size_t n = series.size();
  std::vector<double> hv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(m.value[i] > 0.0)) throw Error(ErrorCode::DegenerateNorm, fmt::format("zero mix-norm at t = {}", m.t[i]));
    hv[i] = h(m.t[i]);
    if (hv[i] > c_bound * m.value[i] * (1.0 + 1e-12))
      throw Error(ErrorCode::PreconditionViolated,
                  fmt::format("h({}) = {} exceeds c_bound * mixnorm = {}", m.t[i], hv[i], c_bound * m.value[i]));
  }

  ShellDecomposition out;
  out.delta = delta;
  out.q = q;
  out.c_bound = c_bound;
  out.horizon = m.t.back();
  const double low_cap = std::min(delta, delta / (c_bound * c_bound));

  std::size_t idx = 0;
  Wavenumber J_prev = -1;
  for (;;) {
    const double m2 = m.value[idx] * m.value[idx];
    const auto J = smallest_radius(series[idx].field, q, J_prev, (1.0 - delta) * m2);
    if (!J) break;  // cannot happen while Property 2 holds; stop defensively
    ShellEntry e;
    e.J_prev = J_prev;
    e.J = *J;
    e.T = m.t[idx];
    e.property1 = band_energy(series[idx].field, q, J_prev, *J) >= (1.0 - delta) * m2;
    // the first shell has nothing below it; later T were chosen to satisfy it
    e.property2 = true;
    out.entries.push_back(e);

    // ok[i]: low-mode energy below J stays small from sample i to the end
    std::vector<bool> ok(n + 1, true);
    for (std::size_t i = n; i-- > 0;) {
      const double low = band_energy(series[i].field, q, -1, *J);
      ok[i] = ok[i + 1] && low <= low_cap * hv[i] * hv[i];
    }
    std::size_t next = idx + 1;
    while (next < n && m.t[next] < e.T + 1.0) ++next;
    if (next >= n) break;
    while (next < n && !ok[next]) ++next;
    if (next >= n) {
      out.horizon_exhausted = true;
      break;
    }
    idx = next;
    J_prev = *J;
  }
  return out;
}

WitnessObservable transient_witness(const SpectrumSeries& series, const ShellDecomposition& shells, double q,
                                    const RateFunction& h, double delta) {
  if (!(delta > 0.0 && delta < 1.0 / 3.0)) throw Error(ErrorCode::PreconditionViolated, "delta must lie in (0, 1/3)");
  if (shells.entries.size() < 2)
    throw Error(ErrorCode::PreconditionViolated,
                fmt::format("shell decomposition has {} entries, need at least 2", shells.entries.size()));

  struct Pick {
    std::size_t shell;
    std::size_t sample;
    double ratio;
    double h;
    double m;
  };
  std::vector<Pick> picks;
  for (std::size_t i = 0; i < shells.entries.size(); ++i) {
    const std::size_t s = series.index_of(shells.entries[i].T);
    const double m = sobolev_norm(series[s].field, -q);
    const double hv = h(series[s].t);
    const double r = hv / m;
    const double limit = picks.empty() ? delta / 2.0 : delta * delta / 2.0 * picks.back().ratio;
    if (r <= limit) picks.push_back({i, s, r, hv, m});
  }
  if (picks.empty())
    throw Error(ErrorCode::SubsequenceUnavailable,
                fmt::format("no shell time has h / mixnorm <= {} within the horizon", delta / 2.0));

  // one block of g per selected shell
  std::vector<FourierField::Entries> blocks;
  FourierField::Entries g;
  for (const auto& p : picks) {
    const WavenumberSet I = shells.shell(p.shell);
    FourierField::Entries block;
    for (const auto& [k, v] : series[p.sample].field.entries()) {
      if (!I.contains(k)) continue;
      block.emplace(k, v * (weight(k, -2.0 * q) * p.h / (p.m * p.m)));
    }
    g.insert(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }

  WitnessObservable w;
  w.mode = WitnessMode::transient;
  w.q = q;
  w.delta = delta;
  w.g = FourierField(series.dims(), series.symmetry(), std::move(g));
  for (std::size_t l = 0; l < picks.size(); ++l) {
    const FourierField& f = series[picks[l].sample].field;
    TransientTerm term;
    term.t = series[picks[l].sample].t;
    term.shell = picks[l].shell;
    term.ratio = picks[l].ratio;
    term.h = picks[l].h;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      complex part = 0.0;
      for (const auto& [k, gv] : blocks[j]) part += f.at(k) * std::conj(gv);
      if (j < l) term.E1 += part;
      else if (j > l) term.E2 += part;
      else term.own = part.real();
    }
    term.pairing = inner_product(f, w.g).real();
    w.selected_times.push_back(term.t);
    w.terms.push_back(term);
  }
  w.guaranteed_bound = fmt::format("<f^T, g> >= (1 - 3*{0}) h(T) at the selected times, ||g||_H^{1}^2 <= {0}^2", delta, q);
  return w;
}

nlohmann::json VerificationReport::summary() const {
  std::size_t checked = 0;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (!r.pass) continue;
    ++checked;
    if (!*r.pass) ++failed;
  }
  return {{"passed", passed}, {"tail_max", tail_max}, {"checked", checked}, {"failed", failed}};
}

VerificationReport verify_witness(const SpectrumSeries& series, const WitnessObservable& w, double q,
                                  const RateFunction& h, double tail_fraction) {
  if (series.dims() != w.g.dims() || series.symmetry() != w.g.symmetry())
    throw Error(ErrorCode::ConventionMismatch, "witness and series use different conventions");
  VerificationReport report;
  const TimeSeriesReal m = mixnorm_series(series, q);
  std::vector<double> corr(series.size());
  std::vector<double> hv(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series[i].t;
    corr[i] = std::abs(inner_product(series[i].field, w.g));
    hv[i] = h(t);
    VerificationRow row{t, corr[i], hv[i], m.value[i], std::nullopt};
    if (std::binary_search(w.selected_times.begin(), w.selected_times.end(), t)) {
      switch (w.mode) {
        case WitnessMode::duality:
          row.pass = corr[i] > 0.0 && std::abs(corr[i] - m.value[i]) <= 1e-10 * m.value[i];
          break;
        case WitnessMode::sign_state:
          row.pass = corr[i] > 0.0 && corr[i] >= w.c * hv[i] * (1.0 - 1e-12);
          break;
        case WitnessMode::transient:
          row.pass = corr[i] > 0.0 && corr[i] >= (1.0 - 3.0 * w.delta) * hv[i] * (1.0 - 1e-12);
          break;
      }
    }
    report.rows.push_back(row);
  }
  report.tail_max = empirical_limsup(TimeSeriesReal(m.t, corr), TimeSeriesReal(m.t, hv), tail_fraction);
  bool any = false;
  bool all = true;
  for (const auto& r : report.rows) {
    if (!r.pass) continue;
    any = true;
    all = all && *r.pass;
  }
  report.passed = any && all && !w.g.empty();
  return report;
}

void write_verification_csv(std::ostream& out, const VerificationReport& report) {
  out << "t,corr,h,mixnorm,pass\n";
  for (const auto& r : report.rows) {
    out << format_double(r.t) << ',' << format_double(r.corr) << ',' << format_double(r.h) << ','
        << format_double(r.mixnorm) << ',' << (r.pass ? (*r.pass ? "true" : "false") : "") << '\n';
  }
}

}  // namespace mixnorm
