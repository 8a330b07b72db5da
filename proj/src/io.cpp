#include "dnstrip/io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "dnstrip/errors.hpp"

namespace dnstrip::io {

std::string format_number(double v) { return fmt::format("{}", v); }

std::string format_number(long long v) { return fmt::format("{}", v); }

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw ConfigError("csv: empty header");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw ConfigError(fmt::format("csv: row has {} fields, header has {}", row.size(), header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(r[i]);
    }
    out += "\r\n";
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

std::string two_column(std::string_view xlabel, std::string_view ylabel, const std::vector<double>& x,
                       const std::vector<double>& y) {
  if (x.size() != y.size()) throw ConfigError("two_column: length mismatch");
  std::string out = fmt::format("# {} {}\n", xlabel, ylabel);
  for (std::size_t i = 0; i < x.size(); ++i) out += fmt::format("{} {}\n", x[i], y[i]);
  return out;
}

std::string grid_text(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& values) {
  if (values.size() != x.size() * y.size()) throw ConfigError("grid_text: size mismatch");
  std::string out = fmt::format("# nx {} ny {}\n", x.size(), y.size());
  auto line = [&out](auto first, auto last) {
    for (auto it = first; it != last; ++it) {
      if (it != first) out += ' ';
      out += format_number(*it);
    }
    out += '\n';
  };
  line(x.begin(), x.end());
  line(y.begin(), y.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto row = values.begin() + static_cast<std::ptrdiff_t>(i * y.size());
    line(row, row + static_cast<std::ptrdiff_t>(y.size()));
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError(fmt::format("cannot open {} for writing", tmp.string()));
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw ConfigError(fmt::format("write to {} failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dnstrip::io
