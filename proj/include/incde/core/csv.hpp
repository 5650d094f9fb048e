#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace incde {

/// Comma-separated table with a header row; numbers use round-trip precision.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  /// Mixed row of preformatted cells.
  void row_cells(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::string path_;
};

std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; throws ConfigError naming the column.
  std::size_t column(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
};

/// Plain CSV without quoting, as written by CsvWriter.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace incde
