#ifndef MIXNORM_SPECTRAL_HPP
#define MIXNORM_SPECTRAL_HPP

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixnorm/errors.hpp"

namespace mixnorm {

using complex = std::complex<double>;

// Baker-type dynamics double the wavenumber every step; 128 bits keeps the
// lattice exact well past the 100-step horizons the analyses need.
using Wavenumber = __int128;

std::string to_string(Wavenumber k);
Wavenumber parse_wavenumber(std::string_view text);
Wavenumber abs(Wavenumber k);

/// Largest |k_j| reachable by the coefficient dynamics before doubling would
/// leave the representable range.
inline constexpr Wavenumber kMaxWavenumber = Wavenumber(1) << 125;

struct Wavevector {
  Wavenumber k1 = 0;
  Wavenumber k2 = 0;

  friend auto operator<=>(const Wavevector&, const Wavevector&) = default;

  bool is_zero() const { return k1 == 0 && k2 == 0; }
  Wavevector operator-() const { return {-k1, -k2}; }
  /// |k|^2 in floating point; exact for grid-sized and power-of-two modes.
  double magnitude_sq() const;
  /// Smallest integer J with |k| <= J.
  Wavenumber ceil_magnitude() const;
};

enum class Symmetry { one_sided, full_lattice };

std::string_view to_string(Symmetry s);
Symmetry parse_symmetry(std::string_view s);

/// Fourier coefficients f_k of a mean-zero field on the d-torus, d in {1, 2}.
///
/// Entries are kept sorted by wavevector so iteration order, and therefore
/// every serialized form, is deterministic. A one-sided field stores only
/// wavevectors whose leading nonzero component is positive and represents the
/// real function sum_k (f_k e^{2 pi i k.x} + c.c.); norms count each stored
/// mode once.
class FourierField {
 public:
  using Entries = std::map<Wavevector, complex>;

  FourierField(int dims, Symmetry symmetry) : dims_(validate_dims(dims)), symmetry_(symmetry) {}
  /// Validates every entry; see make_field for the checks.
  FourierField(int dims, Symmetry symmetry, Entries entries);

  int dims() const { return dims_; }
  Symmetry symmetry() const { return symmetry_; }
  const Entries& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  complex at(const Wavevector& k) const;

  /// Largest |k_j| over stored entries (0 for the empty field).
  Wavenumber max_component() const;
  /// True when f_{-k} = conj(f_k) holds for every stored k within `tol`
  /// (absolute). One-sided fields are real by construction.
  bool is_real(double tol = 0.0) const;

 private:
  static int validate_dims(int dims);

  int dims_;
  Symmetry symmetry_;
  Entries entries_;
};

/// Validated construction from an entry list. Rejects k = 0, duplicate
/// wavevectors, wavevectors not matching `dims`, non-finite amplitudes and,
/// for one-sided fields, wavevectors with a non-positive leading component.
FourierField make_field(std::span<const std::pair<Wavevector, complex>> entries, int dims,
                        Symmetry symmetry);

/// Homogeneous Sobolev norm (sum_k |k|^{2 alpha} |f_k|^2)^{1/2} over the
/// stored index set.
double sobolev_norm(const FourierField& f, double alpha);
/// Squared norm; avoids the sqrt round trip for energy bookkeeping.
double sobolev_norm_sq(const FourierField& f, double alpha);

/// sum_k f_k conj(g_k). Both fields must share dims and symmetry.
complex inner_product(const FourierField& f, const FourierField& g);

class WavenumberSet {
 public:
  enum class Kind { explicit_list, ball, annulus };

  static WavenumberSet explicit_list(std::set<Wavevector> modes);
  static WavenumberSet ball(Wavenumber radius);
  /// {k : inner < |k| <= outer}; inner may be negative (no lower cut).
  static WavenumberSet annulus(Wavenumber inner, Wavenumber outer);

  Kind kind() const { return kind_; }
  Wavenumber inner() const { return inner_; }
  Wavenumber outer() const { return outer_; }
  const std::set<Wavevector>& modes() const { return modes_; }

  bool contains(const Wavevector& k) const;
  /// Lattice points of the set (k != 0) in the given convention, sorted.
  /// Throws StateCapExceeded if more than `cap` points would be produced.
  std::vector<Wavevector> enumerate(int dims, Symmetry symmetry, std::size_t cap) const;

 private:
  WavenumberSet(Kind kind, Wavenumber inner, Wavenumber outer, std::set<Wavevector> modes)
      : kind_(kind), inner_(inner), outer_(outer), modes_(std::move(modes)) {}

  Kind kind_;
  Wavenumber inner_;
  Wavenumber outer_;
  std::set<Wavevector> modes_;
};

/// P_I f: keeps exactly the entries with k in I.
FourierField project(const FourierField& f, const WavenumberSet& modes);

/// Dense samples of a field on a uniform N (d = 1) or N x N (d = 2) grid,
/// row-major with the first coordinate slowest: value(i, j) = f(i/N, j/N).
struct Grid {
  int dims = 2;
  int n = 0;
  std::vector<complex> values;

  std::size_t index(int i, int j = 0) const { return dims == 1 ? std::size_t(i) : std::size_t(i) * n + j; }
};

/// Synthesizes f(x) = sum_k f_k e^{2 pi i k.x} on the grid (one-sided fields
/// include the conjugate partners). `n` must be a power of two exceeding
/// twice the largest stored |k_j|.
Grid to_grid(const FourierField& f, int n);
/// Inverse of to_grid; drops the mean and returns a full-lattice field over
/// k_j in [-N/2, N/2). Coefficients with |f_k| <= drop_below are omitted.
FourierField to_spectrum(const Grid& grid, double drop_below = 0.0);

bool is_power_of_two(long n);

}  // namespace mixnorm

#endif
