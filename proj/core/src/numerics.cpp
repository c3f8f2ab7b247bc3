#include "heatlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heatlab/detail/gauss_kronrod.hpp"
#include "heatlab/errors.hpp"

namespace heatlab {

DecayEnvelope gaussianEnvelope(double scale, double rate, double growth) {
  if (!(rate > 0.0)) throw ArgumentError("gaussianEnvelope: rate must be positive");
  return DecayEnvelope{[=](double s) { return scale * std::exp(-rate * s * s + growth * s); }};
}

QuadratureResult integrateRadial(const RealFunction& f, double lower, double upper, double tol,
                                 const QuadratureOptions& options) {
  if (!(tol > 0.0)) throw ArgumentError("integrateRadial: tol must be positive");
  if (!(upper >= lower) || !std::isfinite(lower) || !std::isfinite(upper))
    throw ArgumentError("integrateRadial: need finite lower <= upper");

  auto wrapped = [&f](double s) { return std::array<double, 1>{f(s)}; };
  const auto q = detail::gaussKronrodAdaptive<1>(wrapped, lower, upper, {tol}, options.relTol,
                                                 options.maxPanels, options.initialPanelWidth);
  if (!std::isfinite(q.value[0]))
    throw QuadratureError("integrateRadial: integrand produced a non-finite value", q.value[0],
                          q.error[0]);
  if (!q.converged)
    throw QuadratureError("integrateRadial: no convergence after " +
                              std::to_string(options.maxPanels) + " panels",
                          q.value[0], q.error[0]);
  return {q.value[0], q.error[0], q.evaluations};
}

double truncationRadius(const DecayEnvelope& tail, double lower, double tol) {
  const double threshold = tol * 1e-3;
  double s = std::max(1.0, 2.0 * std::abs(lower));
  for (int i = 0; i < 200; ++i) {
    if (tail.bound(s) < threshold) return s;
    s *= 1.25;
  }
  throw QuadratureError("truncationRadius: envelope never drops below tolerance",
                        std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::infinity());
}

QuadratureResult integrateRadial(const RealFunction& f, double lower, const DecayEnvelope& tail,
                                 double tol, const QuadratureOptions& options) {
  const double upper = truncationRadius(tail, lower, tol);
  QuadratureResult r = integrateRadial(f, lower, upper, tol, options);
  r.errorEstimate += tol * 1e-3;
  return r;
}

double sumSeries(const IndexFunction& term, const IndexFunction& tailBound, double tol,
                 std::size_t maxTerms) {
  if (!(tol > 0.0)) throw ArgumentError("sumSeries: tol must be positive");
  double sum = 0.0;
  double compensation = 0.0;
  for (std::size_t k = 0; k < maxTerms; ++k) {
    const double y = term(k) - compensation;
    const double next = sum + y;
    compensation = (next - sum) - y;
    sum = next;
    if (tailBound(k) < tol) return sum;
  }
  throw SeriesError("sumSeries: tail bound stayed above tolerance within " +
                    std::to_string(maxTerms) + " terms");
}

RichardsonResult richardsonLimit(std::span<const ExtrapolationSample> samples, double order) {
  if (samples.size() < 3) throw ArgumentError("richardsonLimit: need at least 3 samples");
  if (!(order > 0.0)) throw ArgumentError("richardsonLimit: order must be positive");
  std::vector<ExtrapolationSample> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.h > b.h; });
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i].h > 0.0)) throw ArgumentError("richardsonLimit: step sizes must be positive");
    if (i > 0 && s[i].h == s[i - 1].h) throw ArgumentError("richardsonLimit: duplicate step size");
  }

  // Neville's scheme at x = 0 in the variable x = h^order.
  auto extrapolate = [&](std::size_t first) {
    const std::size_t m = s.size() - first;
    std::vector<double> x(m);
    std::vector<double> p(m);
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = std::pow(s[first + i].h, order);
      p[i] = s[first + i].value;
    }
    for (std::size_t level = 1; level < m; ++level) {
      for (std::size_t i = 0; i + level < m; ++i) {
        const double xi = x[i];
        const double xj = x[i + level];
        p[i] = (xi * p[i + 1] - xj * p[i]) / (xi - xj);
      }
    }
    return p[0];
  };

  const double full = extrapolate(0);
  const double reduced = extrapolate(1);
  return {full, std::abs(full - reduced)};
}

double centralDiff(const RealFunction& f, double t, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("centralDiff: step must be positive");
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

SlopeFit fitLogLogSlope(std::span<const PowerLawPoint> points) {
  if (points.size() < 3) throw ArgumentError("fitLogLogSlope: need at least 3 points");
  const double m = static_cast<double>(points.size());
  double meanX = 0.0;
  double meanY = 0.0;
  for (const auto& p : points) {
    if (!(p.t > 0.0) || !(p.y > 0.0))
      throw ArgumentError("fitLogLogSlope: t and y must be positive");
    meanX += std::log(p.t);
    meanY += std::log(p.y);
  }
  meanX /= m;
  meanY /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.t) - meanX;
    sxx += dx * dx;
    sxy += dx * (std::log(p.y) - meanY);
  }
  if (!(sxx > 0.0)) throw ArgumentError("fitLogLogSlope: t values must be distinct");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = meanY - fit.slope * meanX;
  double ssr = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.y) - (fit.intercept + fit.slope * std::log(p.t));
    ssr += r * r;
  }
  fit.stdError = std::sqrt(ssr / (m - 2.0) / sxx);
  fit.pointCount = points.size();
  return fit;
}

std::vector<double> makeGrid(double min, double max, std::size_t count, bool logSpacing) {
  if (count < 2) throw ArgumentError("makeGrid: need at least 2 points");
  if (!(min < max)) throw ArgumentError("makeGrid: need min < max");
  if (logSpacing && !(min > 0.0)) throw ArgumentError("makeGrid: log spacing needs min > 0");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = logSpacing ? std::exp(std::log(min) + u * (std::log(max) - std::log(min)))
                         : min + u * (max - min);
  }
  grid.front() = min;
  grid.back() = max;
  return grid;
}

}  // namespace heatlab
