#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "h2cem/domain.hpp"

namespace h2cem::io {

/// File-system or format failure; maps to the I/O exit status.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hourly series keyed by column name, in file column order.
struct HourlyTable {
  std::vector<std::string> names;
  std::map<std::string, Series> series;
  Index hours = 0;
  bool leap_day_trimmed = false;

  const Series& at(const std::string& name) const;
};

inline constexpr Index kLeapYearHours = 8784;
/// 1-based hour of year of the first Feb 29 hour.
inline constexpr Index kLeapDayFirstHour = 59 * 24 + 1;

/// Drops the 24 Feb 29 hours from a leap-year series; other lengths pass through.
Series trim_leap_day(const Series& s);

/// Reads `hour,<name>...` with hours numbered 1..T. Lines starting with '#'
/// are comments. A leap-year table of 8784 rows is trimmed to 8760.
HourlyTable parse_hourly_csv(std::istream& in, const std::string& source);
HourlyTable read_hourly_csv(const std::filesystem::path& path);

/// Plain comma-separated rows; first non-comment row is the header.
struct CsvRows {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t column(const std::string& name) const;
};
CsvRows read_csv_rows(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(const std::string& line);
double parse_number(const std::string& field, const std::string& context);

/// Writes `text` next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace h2cem::io
