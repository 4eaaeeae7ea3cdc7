#include "svmrates_cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "svmrates/format.hpp"
#include "svmrates/stats.hpp"

namespace svmrates::cli {

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::invalid_argument("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

constexpr double kWidth = 640, kHeight = 440, kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  std::ostringstream s;
  s.precision(5);
  s << v;
  return s.str();
}

}  // namespace

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table '" + path + "'");
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (t.columns.empty()) {
      t.columns = split_csv(line);
    } else {
      t.rows.push_back(split_csv(line));
    }
  }
  return t;
}

void plot_table(const std::string& csv_path, const std::string& svg_path, const PlotSpec& spec) {
  const Table t = read_table(csv_path);
  const std::size_t xc = t.column(spec.x_column), yc = t.column(spec.y_column);
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
  std::vector<std::string> order;
  for (const auto& row : t.rows) {
    double x = 0, y = 0;
    try {
      x = parse_number(row.at(xc));
      y = parse_number(row.at(yc));
    } catch (const std::exception&) {
      continue;
    }
    if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y)) continue;
    const std::string key =
        spec.group_column.empty() ? spec.y_column
                                  : spec.group_column + "=" + row.at(t.column(spec.group_column));
    if (!series.count(key)) order.push_back(key);
    series[key].first.push_back(std::log10(x));
    series[key].second.push_back(std::log10(y));
  }
  double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
  for (const auto& [k, s] : series) {
    for (double v : s.first) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.second) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (series.empty()) x0 = y0 = 0, x1 = y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  const auto py = [&](double v) { return kTop + (1.0 - (v - y0) / (y1 - y0)) * ph; };

  std::ofstream out(svg_path);
  if (!out) throw std::runtime_error("cannot write plot '" + svg_path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
      << spec.title << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = x0 + (x1 - x0) * i / 4.0, vy = y0 + (y1 - y0) * i / 4.0;
    out << "<text x=\"" << px(vx) << "\" y=\"" << kHeight - kBottom + 16
        << "\" text-anchor=\"middle\">" << num(std::pow(10.0, vx)) << "</text>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(vy) + 4 << "\" text-anchor=\"end\">"
        << num(std::pow(10.0, vy)) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << spec.x_column << " (log)</text>\n"
      << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" transform=\"rotate(-90 16 "
      << kTop + ph / 2 << ")\" text-anchor=\"middle\">" << spec.y_column << " (log)</text>\n";
  std::size_t idx = 0;
  for (const auto& key : order) {
    const auto& [xs, ys] = series[key];
    const char* color = kColors[idx % 8];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i]) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    }
    std::string legend = key;
    const double xmin = *std::min_element(xs.begin(), xs.end());
    const double xmax = *std::max_element(xs.begin(), xs.end());
    if (xs.size() >= 2 && xmax > xmin) {
      const auto fit = stats::ols(xs, ys);
      out << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(fit.intercept + fit.slope * xmin)
          << "\" x2=\"" << px(xmax) << "\" y2=\"" << py(fit.intercept + fit.slope * xmax)
          << "\" stroke=\"" << color << "\"/>\n";
      legend += " slope " + num(fit.slope);
    }
    out << "<text x=\"" << kWidth - kRight + 8 << "\" y=\"" << kTop + 14 * (idx + 1)
        << "\" fill=\"" << color << "\">" << legend << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";
}

}  // namespace svmrates::cli
