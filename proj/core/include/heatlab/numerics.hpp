#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace heatlab {

using RealFunction = std::function<double(double)>;
using IndexFunction = std::function<double(std::size_t)>;

struct QuadratureResult {
  double value = 0.0;
  double errorEstimate = 0.0;  // absolute
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  /// Converged when errorEstimate <= max(tol, relTol * |value|).
  double relTol = 0.0;
  std::size_t maxPanels = 4000;
  /// Width of the starting panels; 0 starts from a single panel. Set it to
  /// the integrand's length scale when a narrow peak sits inside a wide domain.
  double initialPanelWidth = 0.0;
};

/// Upper bound on |f(s)| for large s. Marks an infinite upper limit; the
/// integral is truncated where bound(s) drops below tol * 1e-3.
struct DecayEnvelope {
  RealFunction bound;
};

/// bound(s) = scale * exp(-rate * s^2 + growth * s)
DecayEnvelope gaussianEnvelope(double scale, double rate, double growth = 0.0);

QuadratureResult integrateRadial(const RealFunction& f, double lower, double upper, double tol,
                                 const QuadratureOptions& options = {});

QuadratureResult integrateRadial(const RealFunction& f, double lower, const DecayEnvelope& tail,
                                 double tol, const QuadratureOptions& options = {});

/// Point beyond which the envelope is below tol * 1e-3.
double truncationRadius(const DecayEnvelope& tail, double lower, double tol);

/// Sums term(0) + term(1) + ... stopping at the first k with tailBound(k) < tol,
/// where tailBound(k) bounds |sum_{j>k} term(j)|.
double sumSeries(const IndexFunction& term, const IndexFunction& tailBound, double tol,
                 std::size_t maxTerms = std::size_t{1} << 20);

struct ExtrapolationSample {
  double h;
  double value;
};

struct RichardsonResult {
  double limit = 0.0;
  /// |limit - limit without the coarsest sample|.
  double residual = 0.0;
};

/// Extrapolates value(h) = L + c1 h^order + c2 h^(2 order) + ... to h = 0.
RichardsonResult richardsonLimit(std::span<const ExtrapolationSample> samples, double order);

double centralDiff(const RealFunction& f, double t, double h);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stdError = 0.0;
  std::size_t pointCount = 0;
};

struct PowerLawPoint {
  double t;
  double y;
};

/// Least-squares line through (ln t, ln y).
SlopeFit fitLogLogSlope(std::span<const PowerLawPoint> points);

/// count points from min to max, geometric when logSpacing, else uniform.
std::vector<double> makeGrid(double min, double max, std::size_t count, bool logSpacing);

}  // namespace heatlab
