#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace accel::csv {

/// %.17g with "nan"/"inf"/"-inf" spelled out.
std::string format(double value);
/// Formats exp(log_value). Values below the double range are written as
/// "<mantissa>e<exponent>" computed from log10, e.g. 3.2e-50012.
std::string format_exp(double log_value);
/// Natural log of a field written by format or format_exp. Large negative
/// exponents are parsed by hand; zero gives -inf.
double parse_log(std::string_view field);
double parse(std::string_view field);

std::vector<std::string> split(std::string_view line);

/// Accumulates rows in memory and writes them with LF endings.
class Writer {
 public:
  explicit Writer(std::vector<std::string> header);
  void row(std::vector<std::string> fields);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Index of a header column; throws std::out_of_range if absent.
  std::size_t column(std::string_view name) const;
};

Table read(const std::filesystem::path& path);

}  // namespace accel::csv
