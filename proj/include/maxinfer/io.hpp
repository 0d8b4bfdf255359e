#pragma once

// CSV tables and atomic file output.
//
// Dialect: comma separator, period decimal point, '\n' line ends, optional
// header row. Numbers are written with 6 significant digits through
// std::to_chars, so output never depends on the process locale.

#include "maxinfer/linalg.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <unistd.h>

namespace maxinfer::io {

/// Malformed or unreadable input.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_number(double v, int significant = 6) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // drops the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, significant);
  return std::string(buf, res.ptr);
}

inline std::string format_number(std::int64_t v) { return std::to_string(v); }

/// Full round-trip precision, for values that are read back by a program.
inline std::string format_exact(double v) {
  if (!std::isfinite(v)) return format_number(v);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw DimensionError("Table: row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
  }

  friend bool operator==(const Table&, const Table&) = default;
};

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return format_number(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\n\"") != std::string::npos) throw DataError("CSV cell may not contain ',', '\"' or newline: " + s);
  return s;
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t k = 0; k < t.columns.size(); ++k) {
    if (k) out += ',';
    out += t.columns[k];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += format_cell(row[k]);
    }
    out += '\n';
  }
  return out;
}

inline Cell parse_cell(std::string_view s) {
  std::int64_t i = 0;
  const auto ri = std::from_chars(s.data(), s.data() + s.size(), i);
  if (!s.empty() && ri.ec == std::errc() && ri.ptr == s.data() + s.size()) return i;
  double d = 0.0;
  if (parse_double(s, d)) return d;
  return std::string(s);
}

/// Parses a headed CSV produced by to_csv.
inline Table table_from_csv(std::string_view text) {
  Table t;
  std::size_t line_no = 0;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (header) {
      for (auto f : fields) t.columns.emplace_back(f);
      header = false;
      continue;
    }
    if (fields.size() != t.columns.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.columns.size()) +
                      " fields, found " + std::to_string(fields.size()));
    }
    std::vector<Cell> row;
    for (auto f : fields) row.push_back(parse_cell(f));
    t.rows.push_back(std::move(row));
  }
  if (header) throw DataError("CSV has no header row");
  return t;
}

struct NumericCsv {
  std::vector<std::string> columns;  // empty without a header
  Eigen::MatrixXd values;
};

/// Parses an all-numeric CSV. Blank lines are skipped; every data row must
/// have the same number of fields.
inline NumericCsv parse_numeric_csv(std::string_view text, bool has_header) {
  NumericCsv out;
  std::vector<double> flat;
  std::size_t width = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto fields = split_line(line);
    if (header_pending) {
      for (auto f : fields) out.columns.emplace_back(f);
      width = fields.size();
      header_pending = false;
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                      " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t k = 0; k < fields.size(); ++k) {
      double v = 0.0;
      if (!parse_double(fields[k], v) || !std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ", field " + std::to_string(k + 1) +
                        ": not a finite number: '" + std::string(fields[k]) + "'");
      }
      flat.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw DataError("CSV contains no data rows");
  out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < width; ++c)
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = flat[r * width + c];
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError("error reading " + path.string());
  return ss.str();
}

inline NumericCsv read_numeric_csv(const std::filesystem::path& path, bool has_header) {
  try {
    return parse_numeric_csv(read_file(path), has_header);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

inline std::string matrix_to_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& header = {}) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out += ',';
    out += header[k];
  }
  if (!header.empty()) out += '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_exact(m(r, c));
    }
    out += '\n';
  }
  return out;
}

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
  const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("error writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot rename onto " + path.string());
  }
}

inline void write_table(const std::filesystem::path& path, const Table& t) { write_file_atomic(path, to_csv(t)); }

}  // namespace maxinfer::io
