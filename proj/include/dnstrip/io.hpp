#pragma once

// Plain-text artifacts: RFC-4180 CSV tables, two-column plot data and nodal
// grids. Numbers use the shortest representation that round-trips, with '.'
// as decimal separator regardless of locale.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dnstrip::io {

std::string format_number(double v);
std::string format_number(long long v);

// Quotes fields containing ',', '"', CR or LF; records end in CRLF.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  template <class... Ts>
  void add(const Ts&... fields) {
    std::vector<std::string> row;
    row.reserve(sizeof...(fields));
    (row.push_back(field(fields)), ...);
    add_row(std::move(row));
  }
  void add_row(std::vector<std::string> row);

  [[nodiscard]] std::size_t columns() const { return header_.size(); }
  [[nodiscard]] std::size_t rows() const { return rows_.size(); }
  [[nodiscard]] std::string str() const;

private:
  static std::string field(const std::string& s) { return s; }
  static std::string field(const char* s) { return s; }
  static std::string field(double v) { return format_number(v); }
  static std::string field(int v) { return format_number(static_cast<long long>(v)); }
  static std::string field(long v) { return format_number(static_cast<long long>(v)); }
  static std::string field(long long v) { return format_number(v); }
  static std::string field(unsigned long v) { return format_number(static_cast<long long>(v)); }
  static std::string field(bool v) { return v ? "true" : "false"; }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(std::string_view s);

// "# xlabel ylabel" then one "x y" pair per line.
std::string two_column(std::string_view xlabel, std::string_view ylabel, const std::vector<double>& x,
                       const std::vector<double>& y);

// Nodal values on a tensor grid, row-major in x: a comment line with the
// sizes, the x coordinates, the y coordinates, then one line per x node.
std::string grid_text(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& values);

// Writes through a temporary file and renames, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace dnstrip::io
