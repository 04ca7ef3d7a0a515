#include "h2cem/io/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace h2cem::io {

const Series& HourlyTable::at(const std::string& name) const {
  auto it = series.find(name);
  if (it == series.end()) throw IoError("missing column '" + name + "'");
  return it->second;
}

Series trim_leap_day(const Series& s) {
  if (s.size() != kLeapYearHours) return s;
  const Index cut = kLeapDayFirstHour - 1;
  Series out(kHoursPerYear);
  out.head(cut) = s.head(cut);
  out.tail(kHoursPerYear - cut) = s.tail(kLeapYearHours - cut - 24);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    std::size_t b = 0;
    while (b < field.size() && field[b] == ' ') ++b;
    out.push_back(field.substr(b));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& field, const std::string& context) {
  double v = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw IoError(context + ": not a number: '" + field + "'");
  return v;
}

HourlyTable parse_hourly_csv(std::istream& in, const std::string& source) {
  HourlyTable table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> cols;
  bool have_header = false;
  Index expected_hour = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    auto fields = split_csv_line(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (!have_header) {
      if (fields.empty() || fields[0] != "hour")
        throw IoError(where + ": header must start with 'hour'");
      table.names.assign(fields.begin() + 1, fields.end());
      cols.resize(table.names.size());
      have_header = true;
      continue;
    }
    if (fields.size() != table.names.size() + 1)
      throw IoError(where + ": expected " + std::to_string(table.names.size() + 1) +
                    " fields, got " + std::to_string(fields.size()));
    const double hour = parse_number(fields[0], where);
    if (hour != double(expected_hour))
      throw IoError(where + ": expected hour " + std::to_string(expected_hour));
    ++expected_hour;
    for (std::size_t j = 0; j < table.names.size(); ++j)
      cols[j].push_back(parse_number(fields[j + 1], where + " column " + table.names[j]));
  }
  if (!have_header) throw IoError(source + ": empty file");
  table.hours = expected_hour - 1;
  for (std::size_t j = 0; j < table.names.size(); ++j) {
    Series s = Eigen::Map<const Series>(cols[j].data(), Index(cols[j].size()));
    if (s.size() == kLeapYearHours) {
      s = trim_leap_day(s);
      table.leap_day_trimmed = true;
    }
    table.series[table.names[j]] = std::move(s);
  }
  if (table.leap_day_trimmed) table.hours = kHoursPerYear;
  return table;
}

HourlyTable read_hourly_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_hourly_csv(in, path.string());
}

std::size_t CsvRows::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return j;
  throw IoError("missing column '" + name + "'");
}

CsvRows read_csv_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvRows out;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      out.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != out.header.size())
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(out.header.size()) + " fields");
    out.rows.push_back(std::move(fields));
  }
  if (!have_header) throw IoError(path.string() + ": empty file");
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  if (v == 0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace h2cem::io
