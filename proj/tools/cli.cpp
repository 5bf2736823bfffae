#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "mixnorm/classification.hpp"
#include "mixnorm/dynamics.hpp"
#include "mixnorm/rates.hpp"
#include "mixnorm/series.hpp"
#include "mixnorm/witness.hpp"

namespace mixnorm::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) parts.push_back(item.substr(b, e - b + 1));
  }
  return parts;
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(fmt::format("{}: '{}' is not a number", what, text));
}

std::vector<double> doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(to_double(s, what));
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

// --config FILE: JSON object whose keys mirror the flags. The expanded flags
// go right after the subcommand path so later command-line flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + long(i));
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open config " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, fmt::format("config {}: {}", path, e.what()));
  }
  if (!cfg.is_object()) throw Error(ErrorCode::ParseError, "config " + path + ": expected a JSON object");

  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  std::vector<std::string> flags;
  for (const auto& [key, value] : cfg.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    const std::string flag = "--" + name;
    if (value.is_boolean()) {
      if (value.get<bool>()) flags.push_back(flag);
      continue;
    }
    flags.push_back(flag);
    if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + scalar(v);
      flags.push_back(joined);
    } else {
      flags.push_back(scalar(value));
    }
  }
  std::size_t prefix = 0;
  while (prefix < args.size() && !args[prefix].empty() && args[prefix][0] != '-') ++prefix;
  args.insert(args.begin() + long(prefix), flags.begin(), flags.end());
  return args;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::PreconditionViolated, "cannot open " + path.string() + " for writing");
  return out;
}

// prefix + suffix + extension
fs::path derived(const std::string& prefix, const std::string& suffix, const std::string& ext) {
  return fs::path(prefix + suffix + ext);
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
  std::string system;
  std::optional<double> a;
  std::optional<double> b;
  double kappa = 0.0;
  int steps = -1;
  int n = 128;
  double diffusivity = 1e-5;
  int substeps = 8;
  std::uint64_t seed = 0;
  std::string seeds;
  std::string init = "cos1";
  std::string symmetry;
  std::string out;
  std::string q = "0.5,1,2";
};

FourierField parse_modes(const std::string& text, int dims, Symmetry symmetry) {
  std::vector<std::pair<Wavevector, complex>> entries;
  for (const auto& item : split(text, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("mode '" + item + "' needs the form k=re[:im]");
    const auto ks = split(item.substr(0, eq), ',');
    if (int(ks.size()) != dims) throw UsageError(fmt::format("mode '{}' needs {} wavevector components", item, dims));
    Wavevector k{parse_wavenumber(ks[0]), dims == 2 ? parse_wavenumber(ks[1]) : 0};
    const auto parts = split(item.substr(eq + 1), ':');
    if (parts.empty() || parts.size() > 2) throw UsageError("mode '" + item + "' needs the form k=re[:im]");
    const double re = to_double(parts[0], "mode amplitude");
    const double im = parts.size() == 2 ? to_double(parts[1], "mode amplitude") : 0.0;
    entries.emplace_back(k, complex(re, im));
  }
  return make_field(entries, dims, symmetry);
}

FourierField initial_field(const SimulateOptions& o, SystemKind kind) {
  const int dims = kind == SystemKind::sine_flow ? 2 : 1;
  Symmetry symmetry = kind == SystemKind::sine_flow ? Symmetry::full_lattice : Symmetry::one_sided;
  if (!o.symmetry.empty()) symmetry = parse_symmetry(o.symmetry);
  if (o.init == "cos1") return cosine_preset(kind);
  if (o.init.rfind("modes:", 0) == 0) return parse_modes(o.init.substr(6), dims, symmetry);
  if (o.init.rfind("file:", 0) == 0) {
    const SpectrumSeries s = read_ndjson_file(o.init.substr(5));
    if (s.empty()) throw Error(ErrorCode::ParseError, "initial-condition file has no records");
    return s[0].field;
  }
  throw UsageError("unknown --init '" + o.init + "' (cos1, modes:..., file:...)");
}

std::string seeded_path(const std::string& out, std::uint64_t seed) {
  const fs::path p(out);
  return (p.parent_path() / fs::path(p.stem().string() + "_seed" + std::to_string(seed) + p.extension().string()))
      .string();
}

std::string simulate_one(SystemSpec spec, const FourierField& f0, int steps, const std::string& out,
                         const std::vector<double>& qs) {
  const SpectrumSeries series = evolve(spec, f0, steps);
  write_ndjson_file(out, series);
  std::string summary = fmt::format("{}: system={} steps={} records={}\n", out, to_string(spec.kind), steps,
                                    series.size());
  for (double q : qs) {
    summary += fmt::format("  final mixnorm q={}: {}\n", q, format_double(sobolev_norm(series.back().field, -q)));
  }
  return summary;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  SystemSpec spec;
  spec.kind = parse_system_kind(o.system);
  if (o.steps < 0) throw UsageError("--steps must be >= 0");
  if (o.a) spec.a = *o.a;
  if (o.b) {
    spec.b = *o.b;
  } else if (o.a) {
    spec.b = std::sqrt(std::max(0.0, 1.0 - spec.a * spec.a));
  }
  if ((spec.kind == SystemKind::altered_baker || spec.kind == SystemKind::pulsed_diffusion) && !o.a)
    throw UsageError("--a is required for " + std::string(to_string(spec.kind)));
  spec.kappa = o.kappa;
  spec.grid_size = o.n;
  spec.diffusivity = o.diffusivity;
  spec.substeps = o.substeps;
  spec.seed = o.seed;
  spec.validate();
  const FourierField f0 = initial_field(o, spec.kind);
  const std::vector<double> qs = doubles(o.q, "--q");

  if (o.seeds.empty()) {
    out << simulate_one(spec, f0, o.steps, o.out, qs);
    return kOk;
  }
  std::vector<std::future<std::string>> runs;
  for (const auto& s : split(o.seeds, ',')) {
    SystemSpec run = spec;
    try {
      run.seed = std::stoull(s);
    } catch (const std::exception&) {
      throw UsageError("--seeds: '" + s + "' is not an unsigned integer");
    }
    runs.push_back(std::async(std::launch::async, simulate_one, run, f0, o.steps, seeded_path(o.out, run.seed), qs));
  }
  for (auto& r : runs) out << r.get();
  return kOk;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeOptions {
  std::string in;
  std::string out;
  std::string q = "0.5,1,2";
  std::string radii = "1,2,4,8,16,32,64";
  double tail_fraction = 0.25;
  double threshold = 1e-3;
  std::string window;
  std::string fractions;
  std::string csv;
};

void write_norms_csv(std::ostream& os, const SpectrumSeries& series, const std::vector<double>& qs) {
  std::vector<TimeSeriesReal> cols;
  os << 't';
  for (double q : qs) {
    os << fmt::format(",q{}", q);
    cols.push_back(mixnorm_series(series, q));
  }
  os << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    os << format_double(series[i].t);
    for (const auto& c : cols) os << ',' << format_double(c.value[i]);
    os << '\n';
  }
}

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

int cmd_norms(const AnalyzeOptions& o, std::ostream& out) {
  const SpectrumSeries series = read_ndjson_file(o.in);
  const std::vector<double> qs = doubles(o.q, "--q");
  if (o.out.empty()) {
    write_norms_csv(out, series, qs);
  } else {
    auto f = open_out(o.out);
    write_norms_csv(f, series, qs);
  }
  return kOk;
}

int cmd_classify(const AnalyzeOptions& o, std::ostream& out) {
  const SpectrumSeries series = read_ndjson_file(o.in);
  ClassifyOptions options;
  options.tail_fraction = o.tail_fraction;
  options.threshold = o.threshold;
  options.radii.clear();
  for (const auto& r : split(o.radii, ',')) options.radii.push_back(parse_wavenumber(r));
  json reports = json::array();
  for (double q : doubles(o.q, "--q")) {
    const RecurrenceReport report = classify_recurrence(series, q, options);
    reports.push_back(report.to_json());
    if (!o.out.empty()) out << fmt::format("q={} verdict={}\n", q, to_string(report.verdict));
    if (!o.fractions.empty()) {
      auto f = open_out(fmt::format("{}_q{}.csv", o.fractions, q));
      bool first = true;
      for (Wavenumber r : options.radii) {
        std::ostringstream block;
        write_fraction_csv(block, energy_fraction_series(series, WavenumberSet::ball(r), q), r, q);
        std::string text = block.str();
        if (!first) text.erase(0, text.find('\n') + 1);
        f << text;
        first = false;
      }
    }
  }
  emit_json(reports.size() == 1 ? reports[0] : reports, o.out, out);
  return kOk;
}

int cmd_rates(const AnalyzeOptions& o, std::ostream& out) {
  const SpectrumSeries series = read_ndjson_file(o.in);
  const std::vector<double> qs = doubles(o.q, "--q");
  json fits = json::array();
  for (double q : qs) {
    const TimeSeriesReal m = mixnorm_series(series, q);
    TimeWindow window = default_fit_window(m);
    if (!o.window.empty()) {
      const auto w = doubles(o.window, "--window");
      if (w.size() != 2) throw UsageError("--window needs lo,hi");
      window = {w[0], w[1]};
    }
    json fit = to_json(fit_decay_rate(m, window));
    fit["q"] = q;
    fit["tail_max_vs_half"] = {empirical_limsup(m, m, o.tail_fraction), empirical_limsup_half(m, m, o.tail_fraction)};
    fits.push_back(std::move(fit));
  }
  json cross = json::array();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = i + 1; j < qs.size(); ++j) {
      const double lo = std::min(qs[i], qs[j]);
      const double hi = std::max(qs[i], qs[j]);
      if (lo == hi) continue;
      const CrossQComparison c = cross_q_comparison(series, lo, hi, o.tail_fraction);
      cross.push_back({{"q", lo},
                       {"q_prime", hi},
                       {"tail_max_ratio", c.tail_max_ratio},
                       {"tail_max_half", c.tail_max_half},
                       {"monotone_ok", c.monotone_ok}});
    }
  }
  if (!o.csv.empty()) {
    auto f = open_out(o.csv);
    write_norms_csv(f, series, qs);
  }
  emit_json({{"system", series.system()}, {"tail_fraction", o.tail_fraction}, {"fits", fits}, {"cross_q", cross}},
            o.out, out);
  return kOk;
}

// ---- witness ---------------------------------------------------------------

struct WitnessOptions {
  std::string in;
  std::string out = "witness";
  double q = 1.0;
  std::string h = "mixnorm";
  double delta = 0.25;
  std::string t0 = "0";
  std::string modes = "1";
  double c = 0.3;
  std::size_t state_cap = kDefaultStateCap;
  double tail_fraction = 0.25;
};

bool write_witness(const std::string& prefix, const SpectrumSeries& series, const WitnessObservable& w,
                   const VerificationReport& report, json extra, std::ostream& out) {
  {
    auto f = open_out(derived(prefix, "", ".ndjson"));
    write_field_ndjson(f, w.g, std::string(to_string(w.mode)), {{"mode", to_string(w.mode)}, {"q", w.q}});
  }
  json meta = w.metadata();
  meta["source_system"] = series.system();
  meta["verification"] = report.summary();
  for (auto& [k, v] : extra.items()) meta[k] = v;
  {
    auto f = open_out(derived(prefix, "", ".json"));
    f << meta.dump(2) << '\n';
  }
  {
    auto f = open_out(derived(prefix, "_verify", ".csv"));
    write_verification_csv(f, report);
  }
  out << fmt::format("{}: {} selected={} passed={} tail_max={}\n", prefix, to_string(w.mode), w.selected_times.size(),
                     report.passed, format_double(report.tail_max));
  return report.passed;
}

std::set<Wavevector> parse_mode_set(const std::string& text, int dims) {
  std::set<Wavevector> modes;
  for (const auto& item : split(text, ';')) {
    const auto ks = split(item, ',');
    if (int(ks.size()) != dims) throw UsageError(fmt::format("mode '{}' needs {} components", item, dims));
    modes.insert({parse_wavenumber(ks[0]), dims == 2 ? parse_wavenumber(ks[1]) : 0});
  }
  return modes;
}

int cmd_witness_duality(const WitnessOptions& o, std::ostream& out) {
  const SpectrumSeries series = read_ndjson_file(o.in);
  const std::vector<double> t0s = doubles(o.t0, "--t0");
  const RateFunction h = RateFunction::table(mixnorm_series(series, o.q));
  const TimeSeriesReal m = mixnorm_series(series, o.q);
  std::vector<VerificationReport> reports;
  bool ok = true;
  for (double t0 : t0s) {
    const WitnessObservable w = duality_witness(series, t0, o.q);
    VerificationReport report = verify_witness(series, w, o.q, h, o.tail_fraction);
    const std::string prefix = t0s.size() == 1 ? o.out : fmt::format("{}_t0_{}", o.out, t0);
    ok = write_witness(prefix, series, w, report, {{"t0", t0}}, out) && ok;
    reports.push_back(std::move(report));
  }
  auto f = open_out(derived(o.out, "_envelope", ".csv"));
  f << "t,mixnorm";
  for (double t0 : t0s) f << fmt::format(",corr_t0_{}", t0);
  f << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    f << format_double(m.t[i]) << ',' << format_double(m.value[i]);
    for (const auto& r : reports) f << ',' << format_double(r.rows[i].corr);
    f << '\n';
  }
  return ok ? kOk : kNumerical;
}

int cmd_witness_signstate(const WitnessOptions& o, std::ostream& out) {
  const SpectrumSeries series = read_ndjson_file(o.in);
  const RateFunction h = parse_rate_descriptor(o.h, series, o.q);
  const WavenumberSet modes = WavenumberSet::explicit_list(parse_mode_set(o.modes, series.dims()));
  const WitnessObservable w = sign_state_witness(series, modes, o.q, h, o.c, o.state_cap);
  const VerificationReport report = verify_witness(series, w, o.q, h, o.tail_fraction);
  bool chain = true;
  for (double t : w.selected_times) chain = chain && sign_state_bounds(series[series.index_of(t)].field, w).chain_holds();
  const bool ok = write_witness(o.out, series, w, report, {{"h", o.h}, {"bound_chain_holds", chain}}, out);
  return ok && chain ? kOk : kNumerical;
}

int cmd_witness_transient(const WitnessOptions& o, std::ostream& out) {
  const SpectrumSeries series = read_ndjson_file(o.in);
  const RateFunction h = parse_rate_descriptor(o.h, series, o.q);
  const double c_bound = rate_bound_constant(series, o.q, h);
  const ShellDecomposition shells = shell_decomposition(series, o.q, h, o.delta, c_bound);
  const WitnessObservable w = transient_witness(series, shells, o.q, h, o.delta);
  const VerificationReport report = verify_witness(series, w, o.q, h, o.tail_fraction);
  const bool ok = write_witness(o.out, series, w, report, {{"h", o.h}, {"shells", shells.to_json()}}, out);
  return ok ? kOk : kNumerical;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mix-norm diagnostics for scalar fields on the torus"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Evolve an initial field and write the NDJSON series");
  simulate->add_option("--system", sim.system, "baker | altered_baker | pulsed_diffusion | sineflow")->required();
  simulate->add_option("--a", sim.a, "Transfer-matrix entry a");
  simulate->add_option("--b", sim.b, "Transfer-matrix entry b (default sqrt(1 - a^2))");
  simulate->add_option("--kappa", sim.kappa, "Pulsed-diffusion constant");
  simulate->add_option("--steps,--periods", sim.steps, "Map steps or flow periods")->required();
  simulate->add_option("--N", sim.n, "Sine-flow grid size");
  simulate->add_option("--D", sim.diffusivity, "Sine-flow diffusivity");
  simulate->add_option("--substeps", sim.substeps, "Strang substeps per half period");
  simulate->add_option("--seed", sim.seed, "Phase seed");
  simulate->add_option("--seeds", sim.seeds, "Comma list of seeds, one run each");
  simulate->add_option("--init", sim.init, "cos1 | modes:k=re[:im];... | file:<ndjson>");
  simulate->add_option("--symmetry", sim.symmetry, "one_sided | full_lattice for modes:");
  simulate->add_option("--out", sim.out, "Output NDJSON")->required();
  simulate->add_option("--q", sim.q, "Mix-norm indices for the summary");

  AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "Norms, recurrence classification and rate fits");
  analyze->require_subcommand(1);
  auto common = [&an](CLI::App* sub) {
    sub->add_option("--in", an.in, "Input NDJSON series")->required();
    sub->add_option("--out", an.out, "Output file (stdout if omitted)");
    sub->add_option("--q", an.q, "Comma list of q");
    sub->add_option("--tail-fraction", an.tail_fraction, "Tail share of the horizon");
  };
  auto* norms = analyze->add_subcommand("norms", "CSV of mix-norms per q");
  common(norms);
  auto* classify = analyze->add_subcommand("classify", "Recurrence verdict per q");
  common(classify);
  classify->add_option("--radii", an.radii, "Comma list of ball radii");
  classify->add_option("--threshold", an.threshold, "Tail-max threshold");
  classify->add_option("--fractions", an.fractions, "Prefix for energy-fraction CSVs");
  auto* rates = analyze->add_subcommand("rates", "Decay fits and cross-q ratios");
  common(rates);
  rates->add_option("--window", an.window, "Fit window lo,hi");
  rates->add_option("--csv", an.csv, "Also write the mix-norm table");

  WitnessOptions wo;
  auto* witness = app.add_subcommand("witness", "Construct and verify witness observables");
  witness->require_subcommand(1);
  auto wcommon = [&wo](CLI::App* sub) {
    sub->add_option("--in", wo.in, "Input NDJSON series")->required();
    sub->add_option("--out", wo.out, "Output prefix");
    sub->add_option("--q", wo.q, "Mix-norm index");
    sub->add_option("--tail-fraction", wo.tail_fraction, "Tail share for the limsup surrogate");
  };
  auto* duality = witness->add_subcommand("duality", "Witness achieving the mix-norm at t0");
  wcommon(duality);
  duality->add_option("--t0", wo.t0, "Comma list of construction times");
  auto* signstate = witness->add_subcommand("signstate", "Quadrant-state witness on a finite mode set");
  wcommon(signstate);
  signstate->set_help_flag("--help", "Print this help message and exit");
  signstate->add_option("--h", wo.h, "Rate descriptor");
  signstate->add_option("--modes", wo.modes, "Mode set k[,k2];...");
  signstate->add_option("--c", wo.c, "Lower-bound constant");
  signstate->add_option("--state-cap", wo.state_cap, "Largest admissible mode count");
  auto* transient = witness->add_subcommand("transient", "Shell-based witness for a rate h");
  wcommon(transient);
  transient->set_help_flag("--help", "Print this help message and exit");
  transient->add_option("--h", wo.h, "Rate descriptor");
  transient->add_option("--delta", wo.delta, "Shell tolerance, < 1/3");

  try {
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ParseError ? kParse : kNumerical;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*norms) return cmd_norms(an, out);
    if (*classify) return cmd_classify(an, out);
    if (*rates) return cmd_rates(an, out);
    if (*duality) return cmd_witness_duality(wo, out);
    if (*signstate) return cmd_witness_signstate(wo, out);
    if (*transient) return cmd_witness_transient(wo, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ParseError ? kParse : kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace mixnorm::cli
