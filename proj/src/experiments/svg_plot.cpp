#include "incde/experiments/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <iomanip>
#include <sstream>

#include "incde/core/csv.hpp"
#include "incde/core/errors.hpp"

namespace incde::experiments {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string tick_label(double v, bool log) {
  std::ostringstream o;
  if (log) o << "1e" << static_cast<int>(std::lround(v));
  else o << std::setprecision(3) << v;
  return o.str();
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec) {
  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0) && (!spec.log_y || y > 0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  if (spec.log_x) x0 = std::floor(x0), x1 = std::ceil(x1);
  if (spec.log_y) y0 = std::floor(y0), y1 = std::ceil(y1);

  const double L = 70, R = 150, T = 30, B = 50;
  const double pw = spec.width - L - R, ph = spec.height - T - B;
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return T + (1.0 - (v - y0) / (y1 - y0)) * ph; };

  std::ostringstream o;
  o << std::setprecision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double vx = x0 + (x1 - x0) * k / 4.0, vy = y0 + (y1 - y0) * k / 4.0;
    o << "<text x=\"" << px(vx) << "\" y=\"" << T + ph + 15 << "\" text-anchor=\"middle\">" << tick_label(vx, spec.log_x)
      << "</text>\n";
    o << "<text x=\"" << L - 5 << "\" y=\"" << py(vy) + 4 << "\" text-anchor=\"end\">" << tick_label(vy, spec.log_y)
      << "</text>\n";
  }
  o << "<text x=\"" << L + pw / 2 << "\" y=\"" << spec.height - 10 << "\" text-anchor=\"middle\">"
    << escape(spec.x_label) << "</text>\n";
  o << "<text transform=\"translate(15," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(spec.y_label) << "</text>\n";
  o << "<text x=\"" << L + pw / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << escape(spec.title)
    << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i)
      if (usable(series[k].x[i], series[k].y[i]))
        o << px(tx(series[k].x[i])) << ',' << py(ty(series[k].y[i])) << ' ';
    o << "\"/>\n";
    const double ly = T + 15 + 16.0 * static_cast<double>(k);
    o << "<line x1=\"" << L + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 30 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << L + pw + 35 << "\" y=\"" << ly + 4 << "\">" << escape(series[k].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void plot_csv(const std::filesystem::path& csv, const std::string& x_column, const std::vector<std::string>& y_columns,
              const std::string& group_column, const PlotSpec& spec, const std::filesystem::path& out) {
  if (y_columns.empty()) throw ConfigError("plot: no y columns given");
  const CsvTable t = read_csv(csv);
  const std::vector<double> x = t.numeric_column(x_column);
  std::vector<Series> series;
  if (group_column.empty()) {
    for (const auto& c : y_columns) series.push_back({c, x, t.numeric_column(c)});
  } else {
    const std::size_t g = t.column(group_column);
    std::map<std::string, std::size_t> index;
    for (const auto& c : y_columns) {
      const std::vector<double> y = t.numeric_column(c);
      index.clear();
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string key = t.rows[i][g] + (y_columns.size() > 1 ? " " + c : "");
        auto [it, fresh] = index.try_emplace(key, series.size());
        if (fresh) series.push_back({key, {}, {}});
        series[it->second].x.push_back(x[i]);
        series[it->second].y.push_back(y[i]);
      }
    }
  }
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream f(out);
  if (!f) throw ConfigError("plot: cannot write " + out.string());
  f << render_svg(series, spec);
}

}  // namespace incde::experiments
