#include "incde/core/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "incde/core/errors.hpp"

namespace incde {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::trunc), columns_(header.size()), path_(path.string()) {
  if (!out_) throw ConfigError("cannot open " + path_ + " for writing");
  row_cells(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row_cells(cells);
}

void CsvWriter::row_cells(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw ConfigError(path_ + ": row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
  if (!out_) throw ConfigError("write failed for " + path_);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ConfigError("csv: no column \"" + name + "\"");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    try {
      out.push_back(std::stod(r.at(c)));
    } catch (const std::exception&) {
      throw ConfigError("csv: column \"" + name + "\" has a non-numeric cell");
    }
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw ConfigError(path.string() + ": ragged row");
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw ConfigError(path.string() + ": empty file");
  return t;
}

}  // namespace incde
