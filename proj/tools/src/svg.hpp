#pragma once

#include <string>
#include <vector>

namespace heatlab::cli::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Standalone line chart; logX puts x on a log10 axis.
std::string lineChart(const std::string& title, const std::string& xLabel, const std::string& yLabel,
                      const std::vector<Series>& series, bool logX);

/// One coloured cell per (x, y) grid point, coloured by sign and size of value.
std::string heatStrip(const std::string& title, const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::vector<double>& values);

}  // namespace heatlab::cli::svg
