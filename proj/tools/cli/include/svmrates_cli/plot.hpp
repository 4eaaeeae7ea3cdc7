#pragma once

#include <string>
#include <vector>

namespace svmrates::cli {

// Columns of a table written by io::CsvWriter.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::size_t column(const std::string& name) const;
};

Table read_table(const std::string& path);

struct PlotSpec {
  std::string title;
  std::string x_column;
  std::string y_column;
  // Rows are split into series by this column; empty means one series.
  std::string group_column;
};

// Log-log scatter of every series with its least-squares line, read back
// from the table on disk. Nonpositive values are skipped.
void plot_table(const std::string& csv_path, const std::string& svg_path, const PlotSpec& spec);

}  // namespace svmrates::cli
