#include "heatlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "heatlab/errors.hpp"
#include "heatlab/kernels.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this |N - predicted t| is indistinguishable from quadrature noise.
constexpr double kResidualFloor = 1e-13;

double rateOverH(const KernelSample& s, int n) { return -0.5 * n / s.t - s.df_dt; }

void checkTime(double t, const char* op) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(op) + ": t must be positive");
}

}  // namespace

EntropySample nashEntropy(const ModelSpace& m, double t, double tol) {
  checkTime(t, "nashEntropy");
  const QuadratureResult q = integrateAgainstKernel(
      m, t, [](const KernelSample& s) { return s.f; }, 0.0, kInf, tol);
  EntropySample out;
  out.t = t;
  out.N = q.value - 0.5 * m.dimension();
  out.quadError = q.errorEstimate;
  return out;
}

EntropySample entropyDerivative(const ModelSpace& m, double t, double tol) {
  checkTime(t, "entropyDerivative");
  const int n = m.dimension();
  EntropySample out = nashEntropy(m, t, tol);

  double worstError = out.quadError;
  auto N = [&](double s) {
    const EntropySample e = nashEntropy(m, s, tol);
    worstError = std::max(worstError, e.quadError);
    return e.N;
  };
  const double h = t / 10.0;
  const double d1 = centralDiff(N, t, h);
  const double d2 = centralDiff(N, t, h / 2.0);
  const double d4 = centralDiff(N, t, h / 4.0);
  // Two Richardson levels; their gap bounds the truncation error of the finer.
  const double coarse = (4.0 * d2 - d1) / 3.0;
  out.dNdt_direct = (4.0 * d4 - d2) / 3.0;
  const double truncation = std::abs(out.dNdt_direct - coarse);

  const QuadratureResult q = integrateAgainstKernel(
      m, t,
      [n](const KernelSample& s) {
        const double rate = rateOverH(s, n);
        return (s.f - 1.0) * rate - 0.5 * n / s.t;
      },
      0.0, kInf, tol * std::max(1.0, 0.5 * n / t));
  out.dNdt_integrand = q.value;
  out.quadError = std::max(worstError, q.errorEstimate);

  const double allowed =
      100.0 * (tol * std::max(1.0, std::abs(out.dNdt_direct)) + worstError / (h / 4.0) + q.errorEstimate) +
      10.0 * truncation;
  if (std::abs(out.dNdt_direct - out.dNdt_integrand) > allowed)
    throw ConsistencyError("entropyDerivative: difference quotient " + std::to_string(out.dNdt_direct) +
                           " and integrated rate " + std::to_string(out.dNdt_integrand) + " disagree at t=" +
                           std::to_string(t) + " on " + m.name());
  return out;
}

AsymptoticReport entropySlopeAtZero(const ModelSpace& m, std::span<const double> tGrid, double tol) {
  if (tGrid.size() < 3) throw ArgumentError("entropySlopeAtZero: need at least 3 times");
  const bool increasing = tGrid[1] > tGrid[0];
  for (std::size_t i = 0; i < tGrid.size(); ++i) {
    if (!(tGrid[i] > 0.0)) throw ArgumentError("entropySlopeAtZero: times must be positive");
    if (i > 0 && (increasing ? !(tGrid[i] > tGrid[i - 1]) : !(tGrid[i] < tGrid[i - 1])))
      throw ArgumentError("entropySlopeAtZero: time grid must be strictly monotone");
  }

  AsymptoticReport report;
  report.predictedSlope = -0.5 * m.scalarCurvature();
  std::vector<ExtrapolationSample> quotients;
  std::vector<PowerLawPoint> residuals;
  double largestResidual = 0.0;
  for (double t : tGrid) {
    const EntropySample e = nashEntropy(m, t, tol);
    report.samples.push_back(e);
    quotients.push_back({t, e.N / t});
    const double r = std::abs(e.N - report.predictedSlope * t);
    largestResidual = std::max(largestResidual, r);
    residuals.push_back({t, r});
  }
  const RichardsonResult limit = richardsonLimit(quotients, 0.5);
  report.slopeAtZero = limit.limit;
  report.extrapolationResidual = limit.residual;

  if (largestResidual < kResidualFloor) {
    report.residualBelowFloor = true;
    return report;
  }
  std::erase_if(residuals, [](const PowerLawPoint& p) { return !(p.y > 0.0); });
  if (residuals.size() < 3) {
    report.residualBelowFloor = true;
    return report;
  }
  const SlopeFit fit = fitLogLogSlope(residuals);
  report.residualExponent = fit.slope;
  report.residualStdError = fit.stdError;
  return report;
}

double secondMomentFunctional(const ModelSpace& m, double t) {
  return secondMomentFunctional(m, t, m.defaultCutoffRadius());
}

double secondMomentFunctional(const ModelSpace& m, double t, double r) {
  checkTime(t, "secondMomentFunctional");
  if (!(r > 0.0)) throw DomainError("secondMomentFunctional: r must be positive");
  const QuadratureResult q = integrateAgainstKernel(
      m, t, [](const KernelSample& s) { return s.d * s.d; }, 0.0, std::min(0.5 * r, m.injectivityRadius()),
      1e-300, 1e-13);
  return -q.value / (4.0 * t);
}

double fourthMomentFunctional(const ModelSpace& m, double t) {
  return fourthMomentFunctional(m, t, m.defaultCutoffRadius());
}

double fourthMomentFunctional(const ModelSpace& m, double t, double r) {
  checkTime(t, "fourthMomentFunctional");
  if (!(r > 0.0)) throw DomainError("fourthMomentFunctional: r must be positive");
  const QuadratureResult q = integrateAgainstKernel(
      m, t, [](const KernelSample& s) { return -s.f * s.d * s.d; }, 0.0,
      std::min(0.5 * r, m.injectivityRadius()), 1e-300, 1e-13);
  return q.value / (4.0 * t * t);
}

OuterIntegrals outerIntegralBound(const ModelSpace& m, double t) {
  return outerIntegralBound(m, t, m.defaultCutoffRadius());
}

OuterIntegrals outerIntegralBound(const ModelSpace& m, double t, double r) {
  checkTime(t, "outerIntegralBound");
  if (!(r > 0.0)) throw DomainError("outerIntegralBound: r must be positive");
  const int n = m.dimension();
  const double lower = 0.5 * r;
  if (lower >= m.injectivityRadius()) return {};
  // The tails can be as small as e^{-700}; only a relative tolerance is meaningful.
  constexpr double kFloor = 1e-300;
  OuterIntegrals out;
  out.entropyTail = integrateAgainstKernel(
                        m, t, [](const KernelSample& s) { return std::abs(s.f); }, lower, kInf, kFloor, 1e-10)
                        .value;
  out.rateTail = integrateAgainstKernel(
                     m, t, [n](const KernelSample& s) { return std::abs(s.f * rateOverH(s, n)); }, lower, kInf,
                     kFloor, 1e-10)
                     .value;
  return out;
}

}  // namespace heatlab
