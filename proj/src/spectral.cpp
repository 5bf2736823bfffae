#include "mixnorm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fft.hpp"

namespace mixnorm {

std::string to_string(Wavenumber k) {
  if (k == 0) return "0";
  const bool negative = k < 0;
  // work in unsigned space so the most negative value is representable
  unsigned __int128 u = negative ? (unsigned __int128)(-(k + 1)) + 1 : (unsigned __int128)k;
  std::string digits;
  while (u > 0) {
    digits.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Wavenumber parse_wavenumber(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw Error(ErrorCode::ParseError, "empty wavenumber");
  Wavenumber value = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "invalid wavenumber '" + std::string(text) + "'");
    if (value > kMaxWavenumber / 10) throw Error(ErrorCode::ParseError, "wavenumber out of range");
    value = value * 10 + (c - '0');
  }
  return negative ? -value : value;
}

Wavenumber abs(Wavenumber k) { return k < 0 ? -k : k; }

double Wavevector::magnitude_sq() const {
  const double a = double(k1);
  const double b = double(k2);
  return a * a + b * b;
}

Wavenumber Wavevector::ceil_magnitude() const {
  const Wavenumber a = abs(k1);
  const Wavenumber b = abs(k2);
  if (b == 0) return a;
  if (a == 0) return b;
  const Wavenumber m = std::max(a, b);
  if (m < (Wavenumber(1) << 62)) {
    using U = unsigned __int128;
    const U target = U(a) * U(a) + U(b) * U(b);
    auto guess = Wavenumber(std::ceil(std::sqrt((long double)target)));
    while (guess > 0 && U(guess - 1) * U(guess - 1) >= target) --guess;
    while (U(guess) * U(guess) < target) ++guess;
    return guess;
  }
  // only reachable for two-dimensional modes far beyond any grid
  return Wavenumber(std::ceil(std::sqrt((long double)a * a + (long double)b * b)));
}

std::string_view to_string(Symmetry s) { return s == Symmetry::one_sided ? "one_sided" : "full_lattice"; }

Symmetry parse_symmetry(std::string_view s) {
  if (s == "one_sided") return Symmetry::one_sided;
  if (s == "full_lattice") return Symmetry::full_lattice;
  throw Error(ErrorCode::ParseError, "unknown symmetry '" + std::string(s) + "'");
}

namespace {

void check_entry(const Wavevector& k, const complex& v, int dims, Symmetry symmetry) {
  if (k.is_zero()) throw Error(ErrorCode::ZeroModePresent, "mean-zero field cannot store k = 0");
  if (dims == 1 && k.k2 != 0)
    throw Error(ErrorCode::DimensionMismatch, "second component set on a one-dimensional field");
  if (abs(k.k1) > kMaxWavenumber || abs(k.k2) > kMaxWavenumber)
    throw Error(ErrorCode::ParameterConstraintViolated, "wavenumber exceeds representable range");
  if (symmetry == Symmetry::one_sided) {
    const Wavenumber lead = k.k1 != 0 ? k.k1 : k.k2;
    if (lead <= 0)
      throw Error(ErrorCode::ConventionMismatch,
                  "one-sided field requires positive leading component, got (" + to_string(k.k1) + "," +
                      to_string(k.k2) + ")");
  }
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error(ErrorCode::NonFiniteAmplitude, "amplitude at k = (" + to_string(k.k1) + "," + to_string(k.k2) + ")");
}

}  // namespace

int FourierField::validate_dims(int dims) {
  if (dims != 1 && dims != 2) throw Error(ErrorCode::DimensionMismatch, "dims must be 1 or 2");
  return dims;
}

FourierField::FourierField(int dims, Symmetry symmetry, Entries entries)
    : dims_(validate_dims(dims)), symmetry_(symmetry), entries_(std::move(entries)) {
  for (const auto& [k, v] : entries_) check_entry(k, v, dims_, symmetry_);
}

complex FourierField::at(const Wavevector& k) const {
  const auto it = entries_.find(k);
  return it == entries_.end() ? complex{} : it->second;
}

Wavenumber FourierField::max_component() const {
  Wavenumber m = 0;
  for (const auto& [k, v] : entries_) m = std::max({m, abs(k.k1), abs(k.k2)});
  return m;
}

bool FourierField::is_real(double tol) const {
  if (symmetry_ == Symmetry::one_sided) return true;
  for (const auto& [k, v] : entries_) {
    if (std::abs(at(-k) - std::conj(v)) > tol) return false;
  }
  return true;
}

FourierField make_field(std::span<const std::pair<Wavevector, complex>> entries, int dims, Symmetry symmetry) {
  FourierField::Entries map;
  for (const auto& [k, v] : entries) {
    check_entry(k, v, dims, symmetry);
    if (!map.emplace(k, v).second)
      throw Error(ErrorCode::DuplicateWavevector, "(" + to_string(k.k1) + "," + to_string(k.k2) + ") given twice");
  }
  return FourierField(dims, symmetry, std::move(map));
}

double sobolev_norm_sq(const FourierField& f, double alpha) {
  double sum = 0.0;
  for (const auto& [k, v] : f.entries()) {
    const double weight = alpha == 0.0 ? 1.0 : std::pow(k.magnitude_sq(), alpha);
    sum += weight * std::norm(v);
  }
  return sum;
}

double sobolev_norm(const FourierField& f, double alpha) { return std::sqrt(sobolev_norm_sq(f, alpha)); }

complex inner_product(const FourierField& f, const FourierField& g) {
  if (f.dims() != g.dims() || f.symmetry() != g.symmetry())
    throw Error(ErrorCode::ConventionMismatch, "inner product of fields with different conventions");
  complex sum{};
  const bool f_smaller = f.size() <= g.size();
  const auto& small = f_smaller ? f.entries() : g.entries();
  const auto& large = f_smaller ? g.entries() : f.entries();
  for (const auto& [k, v] : small) {
    const auto it = large.find(k);
    if (it == large.end()) continue;
    sum += f_smaller ? v * std::conj(it->second) : it->second * std::conj(v);
  }
  return sum;
}

WavenumberSet WavenumberSet::explicit_list(std::set<Wavevector> modes) {
  return WavenumberSet(Kind::explicit_list, 0, 0, std::move(modes));
}

WavenumberSet WavenumberSet::ball(Wavenumber radius) {
  if (radius < 0) throw Error(ErrorCode::PreconditionViolated, "ball radius must be nonnegative");
  return WavenumberSet(Kind::ball, -1, radius, {});
}

WavenumberSet WavenumberSet::annulus(Wavenumber inner, Wavenumber outer) {
  if (!(inner < outer)) throw Error(ErrorCode::PreconditionViolated, "annulus requires inner < outer");
  return WavenumberSet(Kind::annulus, inner, outer, {});
}

namespace {

// |k| <= r, exact for every representable k and r >= 0.
bool within(const Wavevector& k, Wavenumber r) {
  if (r < 0) return false;
  const Wavenumber a = abs(k.k1);
  const Wavenumber b = abs(k.k2);
  if (a > r || b > r) return false;
  if (a == 0 || b == 0) return true;
  return k.ceil_magnitude() <= r;
}

}  // namespace

bool WavenumberSet::contains(const Wavevector& k) const {
  switch (kind_) {
    case Kind::explicit_list: return modes_.count(k) > 0;
    case Kind::ball: return within(k, outer_);
    case Kind::annulus: return within(k, outer_) && !within(k, inner_);
  }
  return false;
}

std::vector<Wavevector> WavenumberSet::enumerate(int dims, Symmetry symmetry, std::size_t cap) const {
  std::vector<Wavevector> out;
  auto push = [&](const Wavevector& k) {
    if (out.size() == cap)
      throw Error(ErrorCode::StateCapExceeded, "wavenumber set has more than " + std::to_string(cap) + " modes");
    out.push_back(k);
  };
  auto admissible = [&](const Wavevector& k) {
    if (k.is_zero() || (dims == 1 && k.k2 != 0)) return false;
    if (symmetry == Symmetry::one_sided) return (k.k1 != 0 ? k.k1 : k.k2) > 0;
    return true;
  };
  if (kind_ == Kind::explicit_list) {
    for (const auto& k : modes_) {
      if (!admissible(k))
        throw Error(ErrorCode::ConventionMismatch, "explicit mode incompatible with the field convention");
      push(k);
    }
    return out;
  }
  const Wavenumber lo = std::max<Wavenumber>(inner_, 0);
  const Wavenumber r = outer_;
  if (r - lo > Wavenumber(cap)) {
    throw Error(ErrorCode::StateCapExceeded, "wavenumber set has more than " + std::to_string(cap) + " modes");
  }
  if (dims == 1) {
    for (Wavenumber a = lo + 1; a <= r; ++a) {
      if (symmetry == Symmetry::full_lattice) push({-a, 0});
    }
    for (Wavenumber a = lo + 1; a <= r; ++a) push({a, 0});
    std::sort(out.begin(), out.end());
    return out;
  }
  if (r > (Wavenumber(1) << 20))
    throw Error(ErrorCode::PreconditionViolated, "two-dimensional set too large to enumerate");
  for (Wavenumber a = -r; a <= r; ++a) {
    for (Wavenumber b = -r; b <= r; ++b) {
      const Wavevector k{a, b};
      if (admissible(k) && contains(k)) push(k);
    }
  }
  return out;
}

FourierField project(const FourierField& f, const WavenumberSet& modes) {
  FourierField::Entries kept;
  for (const auto& [k, v] : f.entries()) {
    if (modes.contains(k)) kept.emplace_hint(kept.end(), k, v);
  }
  return FourierField(f.dims(), f.symmetry(), std::move(kept));
}

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

Grid to_grid(const FourierField& f, int n) {
  if (!is_power_of_two(n)) throw Error(ErrorCode::GridTooSmall, "grid size must be a power of two");
  if (2 * f.max_component() >= n)
    throw Error(ErrorCode::GridTooSmall, "grid of " + std::to_string(n) + " cannot resolve |k| = " +
                                             to_string(f.max_component()));
  Grid grid{f.dims(), n, std::vector<complex>(f.dims() == 1 ? std::size_t(n) : std::size_t(n) * n)};
  auto deposit = [&](const Wavevector& k, complex v) {
    const int i = detail::bin(long(k.k1), n);
    const int j = f.dims() == 1 ? 0 : detail::bin(long(k.k2), n);
    grid.values[grid.index(i, j)] += v;
  };
  for (const auto& [k, v] : f.entries()) {
    deposit(k, v);
    if (f.symmetry() == Symmetry::one_sided) deposit(-k, std::conj(v));
  }
  detail::Fft fft(f.dims(), n);
  fft.backward(grid.values.data());
  return grid;
}

FourierField to_spectrum(const Grid& grid, double drop_below) {
  if (!is_power_of_two(grid.n)) throw Error(ErrorCode::GridTooSmall, "grid size must be a power of two");
  const int n = grid.n;
  const std::size_t total = grid.dims == 1 ? std::size_t(n) : std::size_t(n) * n;
  if (grid.values.size() != total) throw Error(ErrorCode::DimensionMismatch, "grid storage does not match its size");
  std::vector<complex> work = grid.values;
  detail::Fft fft(grid.dims, n);
  fft.forward(work.data());
  const double scale = 1.0 / double(total);
  FourierField::Entries entries;
  const int rows = n;
  const int cols = grid.dims == 1 ? 1 : n;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const Wavevector k{detail::frequency(i, n), grid.dims == 1 ? 0 : detail::frequency(j, n)};
      if (k.is_zero()) continue;
      const complex v = work[grid.index(i, j)] * scale;
      if (std::abs(v) <= drop_below) continue;
      entries.emplace(k, v);
    }
  }
  return FourierField(grid.dims, Symmetry::full_lattice, std::move(entries));
}

}  // namespace mixnorm
