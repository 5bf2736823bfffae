#include "mixnorm/series.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace mixnorm {

using nlohmann::json;

SpectrumSeries::SpectrumSeries(int dims, Symmetry symmetry, std::string system, json params)
    : dims_(dims), symmetry_(symmetry), system_(std::move(system)), params_(std::move(params)) {
  if (dims != 1 && dims != 2) throw Error(ErrorCode::DimensionMismatch, "dims must be 1 or 2");
}

void SpectrumSeries::append(double t, FourierField field) {
  if (!std::isfinite(t) || t < 0.0) throw Error(ErrorCode::PreconditionViolated, "sample time must be finite and >= 0");
  if (!samples_.empty() && !(t > samples_.back().t))
    throw Error(ErrorCode::PreconditionViolated, "sample times must increase strictly");
  if (field.dims() != dims_ || field.symmetry() != symmetry_)
    throw Error(ErrorCode::ConventionMismatch, "sample convention differs from the series convention");
  samples_.push_back({t, std::move(field)});
}

std::vector<double> SpectrumSeries::times() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.t);
  return out;
}

std::size_t SpectrumSeries::index_of(double t) const {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].t == t) return i;
  }
  throw Error(ErrorCode::MisalignedSeries, fmt::format("no sample at t = {}", t));
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

namespace {

json header_record(int dims, Symmetry symmetry, const std::string& system, const json& params) {
  json header = json::object();
  header["dims"] = dims;
  header["symmetry"] = std::string(to_string(symmetry));
  header["system"] = system;
  header["params"] = params;
  return header;
}

void write_record(std::ostream& out, double t, const FourierField& field) {
  std::string line = "{\"t\":" + format_double(t) + ",\"coeffs\":[";
  bool first = true;
  for (const auto& [k, v] : field.entries()) {
    if (!first) line += ',';
    first = false;
    line += '[';
    line += to_string(k.k1);
    if (field.dims() == 2) {
      line += ',';
      line += to_string(k.k2);
    }
    line += ',' + format_double(v.real()) + ',' + format_double(v.imag()) + ']';
  }
  line += "]}\n";
  out << line;
}

struct Number {
  bool integral = false;
  Wavenumber integer = 0;
  double value = 0.0;
};

bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if ((c == '-' && i == 0) || (c >= '0' && c <= '9')) continue;
    return false;
  }
  return true;
}

// SAX consumer for one sample record. Keeps wavevector components exact even
// when they exceed 64 bits (the DOM parser would round them to double).
class RecordReader final : public nlohmann::json_sax<json> {
 public:
  explicit RecordReader(int dims) : dims_(dims) {}

  bool null() override { return fail("unexpected null"); }
  bool boolean(bool) override { return fail("unexpected boolean"); }
  bool number_integer(number_integer_t v) override { return number({true, Wavenumber(v), double(v)}); }
  bool number_unsigned(number_unsigned_t v) override { return number({true, Wavenumber(v), double(v)}); }
  bool number_float(number_float_t v, const string_t& raw) override {
    if (is_integer_literal(raw)) return number({true, parse_wavenumber(raw), v});
    return number({false, 0, v});
  }
  bool string(string_t&) override { return fail("unexpected string"); }
  bool binary(binary_t&) override { return fail("unexpected binary"); }

  bool start_object(std::size_t) override {
    if (depth_ != 0) return fail("nested object");
    ++depth_;
    return true;
  }
  bool key(string_t& k) override {
    if (depth_ != 1) return fail("unexpected key");
    key_ = k;
    if (key_ != "t" && key_ != "coeffs") return fail("unknown key '" + key_ + "'");
    return true;
  }
  bool end_object() override {
    --depth_;
    return true;
  }
  bool start_array(std::size_t) override {
    if (depth_ == 1 && key_ == "coeffs") {
      depth_ = 2;
      have_coeffs_ = true;
      return true;
    }
    if (depth_ == 2) {
      depth_ = 3;
      tuple_.clear();
      return true;
    }
    return fail("unexpected array");
  }
  bool end_array() override {
    if (depth_ == 3) {
      depth_ = 2;
      return finish_tuple();
    }
    depth_ = 1;
    return true;
  }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    return fail(fmt::format("malformed JSON at byte {}: {}", position, ex.what()));
  }

  const std::string& error() const { return error_; }
  bool complete() const { return have_t_ && have_coeffs_; }
  double t() const { return t_; }
  FourierField::Entries& entries() { return entries_; }

 private:
  bool fail(std::string message) {
    if (error_.empty()) error_ = std::move(message);
    return false;
  }

  bool number(const Number& n) {
    if (depth_ == 1 && key_ == "t") {
      t_ = n.value;
      have_t_ = true;
      return true;
    }
    if (depth_ == 3) {
      tuple_.push_back(n);
      return true;
    }
    return fail("unexpected number");
  }

  bool finish_tuple() {
    const std::size_t expected = std::size_t(dims_) + 2;
    if (tuple_.size() != expected) return fail(fmt::format("coefficient entry needs {} numbers", expected));
    for (int j = 0; j < dims_; ++j) {
      if (!tuple_[std::size_t(j)].integral) return fail("wavevector component is not an integer");
    }
    Wavevector k{tuple_[0].integer, dims_ == 2 ? tuple_[1].integer : 0};
    const complex v{tuple_[std::size_t(dims_)].value, tuple_[std::size_t(dims_) + 1].value};
    if (!entries_.emplace(k, v).second) return fail("duplicate wavevector");
    return true;
  }

  int dims_;
  int depth_ = 0;
  std::string key_;
  std::string error_;
  bool have_t_ = false;
  bool have_coeffs_ = false;
  double t_ = 0.0;
  std::vector<Number> tuple_;
  FourierField::Entries entries_;
};

[[noreturn]] void parse_failure(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, fmt::format("line {}: {}", line, what));
}

}  // namespace

void write_ndjson(std::ostream& out, const SpectrumSeries& series) {
  out << header_record(series.dims(), series.symmetry(), series.system(), series.params()).dump() << '\n';
  for (const auto& s : series.samples()) write_record(out, s.t, s.field);
}

void write_field_ndjson(std::ostream& out, const FourierField& field, const std::string& system, const json& params) {
  out << header_record(field.dims(), field.symmetry(), system, params).dump() << '\n';
  write_record(out, 0.0, field);
}

SpectrumSeries read_ndjson(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (line.empty()) {
    if (!std::getline(in, line)) parse_failure(line_no + 1, "missing header record");
    ++line_no;
  }
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    parse_failure(line_no, e.what());
  }
  int dims = 0;
  Symmetry symmetry{};
  std::string system;
  json params = json::object();
  try {
    dims = header.at("dims").get<int>();
    symmetry = parse_symmetry(header.at("symmetry").get<std::string>());
    if (header.contains("system")) system = header["system"].get<std::string>();
    if (header.contains("params")) params = header["params"];
  } catch (const json::exception& e) {
    parse_failure(line_no, std::string("bad header: ") + e.what());
  } catch (const Error& e) {
    parse_failure(line_no, e.what());
  }
  if (dims != 1 && dims != 2) parse_failure(line_no, "dims must be 1 or 2");

  SpectrumSeries series(dims, symmetry, std::move(system), std::move(params));
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    RecordReader reader(dims);
    bool ok = false;
    try {
      ok = json::sax_parse(line, &reader);
    } catch (const Error& e) {
      parse_failure(line_no, e.what());
    }
    if (!ok) parse_failure(line_no, reader.error().empty() ? "malformed record" : reader.error());
    if (!reader.complete()) parse_failure(line_no, "record needs both \"t\" and \"coeffs\"");
    try {
      series.append(reader.t(), FourierField(dims, symmetry, std::move(reader.entries())));
    } catch (const Error& e) {
      parse_failure(line_no, e.what());
    }
  }
  return series;
}

void write_ndjson_file(const std::filesystem::path& path, const SpectrumSeries& series) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::PreconditionViolated, "cannot open " + path.string() + " for writing");
  write_ndjson(out, series);
}

SpectrumSeries read_ndjson_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return read_ndjson(in);
}

}  // namespace mixnorm
