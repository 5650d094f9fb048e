#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace incde::experiments {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false, log_y = false;
  int width = 640, height = 420;
};

/// Static SVG line chart. Points that are non-finite, or non-positive on a
/// log axis, are dropped.
std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec);

/// Reads `csv`, plots every y column against x (one line per column), or one
/// line per distinct value of `group_column` when it is non-empty.
void plot_csv(const std::filesystem::path& csv, const std::string& x_column, const std::vector<std::string>& y_columns,
              const std::string& group_column, const PlotSpec& spec, const std::filesystem::path& out);

}  // namespace incde::experiments
