#include "heatlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "heatlab/errors.hpp"
#include "heatlab/kernels.hpp"

namespace heatlab {

namespace {

// Matches the band in which kernels switches to the antipodal Laplacian.
constexpr double kAntipodeBand = 1e-7;

void checkTime(double t, const char* op) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(op) + ": t must be positive");
}

}  // namespace

double lypQuantity(const ModelSpace& m, double d, double t) {
  checkTime(t, "lypQuantity");
  const int n = m.dimension();
  if (m.kind() == ModelKind::Sphere2 && std::numbers::pi - d < kAntipodeBand) {
    const KernelSample s = evalKernel(m, d, t);
    return 2.0 * s.laplacianF - s.df_dd * s.df_dd + (s.f - n) / t;
  }
  // With f = d^2/4t + w the O(d^2/t^2) parts cancel analytically:
  // lyp = (d A'/A - (n - 1))/t + 2 Delta w - (d/t) w' - w'^2 + w/t.
  const ExcessPotential ep = excessPotential(m, d, t);
  const double radialExcess = radialAreaLogDerivative(m, d) - (n - 1);
  const double laplacianW = (d > 0.0) ? ep.d2w_dd2 + areaLogDerivative(m, d) * ep.dw_dd : n * ep.d2w_dd2;
  return radialExcess / t + 2.0 * laplacianW - (d / t) * ep.dw_dd - ep.dw_dd * ep.dw_dd + ep.w / t;
}

double perelmanResidual(const ModelSpace& m, double d, double t) {
  return lypQuantity(m, d, t) + m.scalarCurvature();
}

RichardsonResult perelmanLimit(const ModelSpace& m, double d0, double t0, int levels) {
  if (levels < 3) throw ArgumentError("perelmanLimit: need at least 3 levels");
  std::vector<ExtrapolationSample> samples;
  double h = 1.0;
  for (int i = 0; i < levels; ++i, h *= 0.5) samples.push_back({h, perelmanResidual(m, d0 * h, t0 * h)});
  return richardsonLimit(samples, 1.0);
}

double varadhanResidual(const ModelSpace& m, double d, double t) {
  checkTime(t, "varadhanResidual");
  return -t * excessPotential(m, d, t).w;
}

double varadhanSupNorm(const ModelSpace& m, double t, double radius, int samples) {
  if (samples < 2) throw ArgumentError("varadhanSupNorm: need at least 2 samples");
  const double top = std::min(radius, m.injectivityRadius());
  double sup = 0.0;
  for (int i = 0; i < samples; ++i)
    sup = std::max(sup, std::abs(varadhanResidual(m, top * i / (samples - 1), t)));
  return sup;
}

ShiftedSolution ShiftedSolution::make(const ModelSpace& m, double t0, double windowT) {
  if (!(t0 > 0.0)) throw ArgumentError("ShiftedSolution: t0 must be positive");
  if (!(windowT > 0.0)) throw ArgumentError("ShiftedSolution: window must be positive");
  const KernelSample centre = evalKernel(m, 0.0, t0);
  return {m, t0, windowT, centre.H, centre.logH};
}

double hamiltonSlack(const ShiftedSolution& sol, double d, double s) {
  if (!(s > 0.0) || s > sol.windowT) throw DomainError("hamiltonSlack: s outside (0, window]");
  const KernelSample u = evalKernel(sol.base, d, sol.t0 + s);
  const double K = sol.base.ricciLowerBound();
  const double logRatio = sol.logSupBound - u.logH;
  // Delta u/u = |grad f|^2 - Delta f and |grad u|^2/u^2 = |grad f|^2.
  const double lhs = s * (2.0 * u.df_dd * u.df_dd - u.laplacianF);
  return sol.base.dimension() + (4.0 + 2.0 * K * s) * logRatio - lhs;
}

double liYauLowerCheck(const ModelSpace& m, double d, double s) {
  checkTime(s, "liYauLowerCheck");
  const ExcessPotential ep = excessPotential(m, d, s);
  return 0.5 * m.dimension() + d * d / (4.0 * s) - s * ep.dw_dt;
}

BernsteinReport bernsteinScaling(const ShiftedSolution& sol, std::span<const double> dGrid,
                                 std::span<const double> sGrid) {
  if (dGrid.empty() || sGrid.size() < 3) throw ArgumentError("bernsteinScaling: degenerate grid");
  BernsteinReport report;
  for (double s : sGrid) {
    double sup = 0.0;
    for (double d : dGrid) {
      if (!(s > 0.0) || s > sol.windowT) throw ArgumentError("bernsteinScaling: s outside (0, window]");
      sup = std::max(sup, s * std::abs(evalKernel(sol.base, d, sol.t0 + s).laplacianH));
    }
    report.supremum.push_back({s, sup});
  }
  std::vector<PowerLawPoint> positive;
  for (const auto& p : report.supremum)
    if (p.y > 0.0) positive.push_back(p);
  if (positive.size() >= 3) report.fit = fitLogLogSlope(positive);
  return report;
}

SlackReport scanSlack(std::span<const double> dGrid, std::span<const double> tGrid,
                      const std::function<double(double, double)>& slack) {
  if (dGrid.empty() || tGrid.empty()) throw ArgumentError("scanSlack: empty grid");
  SlackReport report;
  report.minSlack = std::numeric_limits<double>::infinity();
  for (double t : tGrid) {
    for (double d : dGrid) {
      const double v = slack(d, t);
      report.grid.emplace_back(d, t);
      report.slack.push_back(v);
      if (v < report.minSlack || std::isnan(v)) {
        report.minSlack = v;
        report.argmin = {d, t};
      }
    }
  }
  return report;
}

}  // namespace heatlab
