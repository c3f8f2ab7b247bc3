#include "svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace heatlab::cli::svg {

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi == lo) lo -= 0.5, hi += 0.5;
  }
  double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

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

std::string header(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, escape(title));
}

std::string axes(const Range& xr, const Range& yr, const std::string& xLabel, const std::string& yLabel, bool logX) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::string s = fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                              x0, y1, x1 - x0, y0 - y1);
  for (int i = 0; i <= 4; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 4, fy = yr.lo + (yr.hi - yr.lo) * i / 4;
    const double px = xr.map(fx, x0, x1), py = yr.map(fy, y0, y1);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"middle\">{:.3g}</text>\n",
                     px, y0 + 16, logX ? std::pow(10.0, fx) : fx);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"end\">{:.3g}</text>\n",
                     x0 - 6, py + 4, fy);
  }
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"13\" "
                   "text-anchor=\"middle\">{}</text>\n",
                   (x0 + x1) / 2, kHeight - 12, escape(xLabel));
  s += fmt::format("<text x=\"16\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
                   "transform=\"rotate(-90 16 {:.2f})\">{}</text>\n",
                   (y0 + y1) / 2, (y0 + y1) / 2, escape(yLabel));
  return s;
}

}  // namespace

std::string lineChart(const std::string& title, const std::string& xLabel, const std::string& yLabel,
                      const std::vector<Series>& series, bool logX) {
  auto xt = [logX](double x) { return logX ? std::log10(x) : x; };
  Range xr, yr;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) xr.add(xt(s.x[i])), yr.add(s.y[i]);
  xr.pad();
  yr.pad();
  std::string out = header(title) + axes(xr, yr, xLabel, yLabel, logX);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % 4];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(xt(s.x[i])) || !std::isfinite(s.y[i])) continue;
      points += fmt::format("{:.2f},{:.2f} ", xr.map(xt(s.x[i]), kLeft, kWidth - kRight),
                            yr.map(s.y[i], kHeight - kBottom, kTop));
    }
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{} points=\"{}\"/>\n", colour,
                       s.dashed ? " stroke-dasharray=\"6 4\"" : "", points);
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}</text>\n",
                       kLeft + 10, kTop + 18 + 16 * k, colour, escape(s.label));
  }
  return out + "</svg>\n";
}

std::string heatStrip(const std::string& title, const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::vector<double>& values) {
  Range xr, yr;
  double scale = 0.0;
  for (double x : xs) xr.add(x);
  for (double y : ys) yr.add(std::log10(y));
  for (double v : values)
    if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
  xr.pad();
  yr.pad();
  std::string out = header(title) + axes(xr, yr, "d", "log10 t", false);
  const double cw = (kWidth - kLeft - kRight) / std::max<std::size_t>(1, xs.size());
  const double ch = (kHeight - kTop - kBottom) / std::max<std::size_t>(1, ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = values[j * xs.size() + i];
      std::string colour = "#000000";
      if (std::isfinite(v)) {
        const int level = static_cast<int>(255 * (1.0 - std::sqrt(std::abs(v) / (scale > 0 ? scale : 1.0))));
        colour = v >= 0 ? fmt::format("#{:02x}{:02x}ff", level, level) : fmt::format("#ff{:02x}{:02x}", level, level);
      }
      out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                         kLeft + cw * i, kHeight - kBottom - ch * (j + 1), cw, ch, colour);
    }
  }
  return out + "</svg>\n";
}

}  // namespace heatlab::cli::svg
