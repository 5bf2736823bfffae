#ifndef MIXNORM_SERIES_HPP
#define MIXNORM_SERIES_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixnorm/spectral.hpp"

namespace mixnorm {

struct Sample {
  double t = 0.0;
  FourierField field;
};

/// Time-ordered trajectory f^t of one evolution run.
class SpectrumSeries {
 public:
  SpectrumSeries(int dims, Symmetry symmetry, std::string system = {},
                 nlohmann::json params = nlohmann::json::object());

  /// Appends a sample; times must increase strictly and the field must use
  /// the series convention.
  void append(double t, FourierField field);

  int dims() const { return dims_; }
  Symmetry symmetry() const { return symmetry_; }
  const std::string& system() const { return system_; }
  const nlohmann::json& params() const { return params_; }
  nlohmann::json& params() { return params_; }

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const Sample& back() const { return samples_.back(); }
  std::vector<double> times() const;
  /// Index of the sample at exactly time t; throws MisalignedSeries otherwise.
  std::size_t index_of(double t) const;

 private:
  int dims_;
  Symmetry symmetry_;
  std::string system_;
  nlohmann::json params_;
  std::vector<Sample> samples_;
};

// Newline-delimited JSON. The first line is the header
//   {"dims":d,"symmetry":"one_sided"|"full_lattice","system":...,"params":{...}}
// and every further line one sample
//   {"t":<float>,"coeffs":[[k1(,k2),re,im],...]}
// with floats written to 17 significant digits and wavevector components as
// exact decimal integers.
void write_ndjson(std::ostream& out, const SpectrumSeries& series);
SpectrumSeries read_ndjson(std::istream& in);

void write_ndjson_file(const std::filesystem::path& path, const SpectrumSeries& series);
SpectrumSeries read_ndjson_file(const std::filesystem::path& path);

/// Single-field convenience used for witness observables: header plus one
/// record at t = 0.
void write_field_ndjson(std::ostream& out, const FourierField& field, const std::string& system,
                        const nlohmann::json& params);

/// Formats x with 17 significant digits (round-trips every double).
std::string format_double(double x);

}  // namespace mixnorm

#endif
