#pragma once

// Plot-ready CSV: comma separated, '.' decimal, one header row, LF endings.
// Numbers use the shortest round-trip representation.

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shocklab/error.hpp"

namespace shocklab {

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline double parse_csv_number(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw io_error("csv_number", "not a number: '" + std::string(s) + "'");
  }
  return x;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return k;
    }
    throw io_error("csv_column", "no column '" + std::string(name) + "'");
  }

  std::vector<double> numbers(std::string_view name) const {
    const std::size_t k = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(parse_csv_number(r.at(k)));
    return out;
  }

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header.size()) throw io_error("csv_shape", "row width differs from header");
    rows.push_back(std::move(cells));
  }
  void add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double x : values) cells.push_back(format_number(x));
    add_row(std::move(cells));
  }
};

/// Columns of equal length under the given names.
inline CsvTable make_table(std::vector<std::string> names, const std::vector<const std::vector<double>*>& cols) {
  if (names.size() != cols.size()) throw io_error("csv_shape", "column names and data differ in count");
  CsvTable t;
  t.header = std::move(names);
  const std::size_t n = cols.empty() ? 0 : cols.front()->size();
  for (const auto* c : cols) {
    if (c->size() != n) throw io_error("csv_shape", "columns differ in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row;
    row.reserve(cols.size());
    for (const auto* c : cols) row.push_back(format_number((*c)[i]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string to_csv(const CsvTable& t) {
  std::string out;
  auto put_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k].find_first_of(",\n\r\"") != std::string::npos) {
        throw io_error("csv_cell", "cell contains a separator: '" + cells[k] + "'");
      }
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  put_row(t.header);
  for (const auto& r : t.rows) put_row(r);
  return out;
}

inline CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t a = 0;
    while (true) {
      const auto c = line.find(',', a);
      cells.emplace_back(line.substr(a, c == std::string_view::npos ? std::string_view::npos : c - a));
      if (c == std::string_view::npos) break;
      a = c + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.add_row(std::move(cells));
    }
  }
  if (first) throw io_error("csv_empty", "CSV has no header row");
  return t;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("write", "cannot open " + path + " for writing");
  f << text;
  if (!f) throw io_error("write", "failed writing " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("read", "cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline void write_csv(const std::string& path, const CsvTable& t) { write_text(path, to_csv(t)); }
inline CsvTable read_csv(const std::string& path) { return parse_csv(read_text(path)); }

}  // namespace shocklab
