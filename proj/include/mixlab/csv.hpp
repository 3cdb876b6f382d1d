#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace mixlab {

using CsvValue = std::variant<std::int64_t, std::uint64_t, double, std::string>;

// Minimal CSV emitter: one header row, comma separation, quotes only where
// RFC 4180 requires them.  Doubles carry 17 significant digits so records
// round-trip to the exact bit pattern.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names) { line(names); }

  void row(const std::vector<CsvValue>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (const auto& v : values) fields.push_back(format(v));
    line(fields);
  }

  static std::string format(const CsvValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* u = std::get_if<std::uint64_t>(&v)) return std::to_string(*u);
    if (const auto* d = std::get_if<double>(&v)) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", *d);
      return buf;
    }
    return std::get<std::string>(v);
  }

 private:
  void line(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << quoted(fields[i]);
    }
    out_ << '\n';
  }

  static std::string quoted(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
    return out;
  }

  std::ostream& out_;
};

}  // namespace mixlab
