#include "heatlab/parametrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "heatlab/errors.hpp"
#include "heatlab/kernels.hpp"

namespace heatlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Plateau slope B(u) = St((u - 1)/kRise) * St((2 - u)/kFall) on [1, 2].
constexpr double kRise = 0.25;
constexpr double kFall = 0.55;
constexpr double kMollifier = 0.6;

double psi(double y) { return y > 0.0 ? std::exp(-kMollifier / y) : 0.0; }
double psiPrime(double y) { return y > 0.0 ? kMollifier / (y * y) * std::exp(-kMollifier / y) : 0.0; }

// Smooth step: 0 for y <= 0, 1 for y >= 1.
double step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double a = psi(y);
  return a / (a + psi(1.0 - y));
}

double stepPrime(double y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  const double a = psi(y);
  const double b = psi(1.0 - y);
  const double den = a + b;
  return (psiPrime(y) * b + a * psiPrime(1.0 - y)) / (den * den);
}

double bump(double u) { return step((u - 1.0) / kRise) * step((2.0 - u) / kFall); }

double bumpPrime(double u) {
  const double a = (u - 1.0) / kRise;
  const double b = (2.0 - u) / kFall;
  return stepPrime(a) / kRise * step(b) - step(a) * stepPrime(b) / kFall;
}

double bumpIntegral(double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  QuadratureOptions opts;
  opts.relTol = 1e-15;
  return integrateRadial(bump, lo, hi, 1e-17, opts).value;
}

double bumpNormalization() {
  static const double c = 1.0 / bumpIntegral(1.0, 2.0);
  return c;
}

// e^x - sum_{k <= N} x^k / k!.
double expTail(double x, int N) {
  if (std::abs(x) >= 1.0) {
    double partial = 0.0, term = 1.0;
    for (int k = 0; k <= N; ++k) {
      partial += term;
      term *= x / (k + 1);
    }
    return std::exp(x) - partial;
  }
  double term = 1.0;
  for (int k = 1; k <= N + 1; ++k) term *= x / k;
  double sum = 0.0;
  for (int k = N + 1; k < N + 60; ++k) {
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    term *= x / (k + 1);
  }
  return sum;
}

// sum_{k != 0} e^{-((d + 2 pi k)^2 - d^2)/4t} on the circle.
double circleImageTail(double d, double t) {
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    double shell = 0.0;
    for (int sign : {1, -1}) {
      const double kk = sign * k;
      shell += std::exp(-kPi * kk * (d + kPi * kk) / t);
    }
    sum += shell;
    if (shell <= 1e-18 * sum || shell == 0.0) break;
  }
  return sum;
}

double euclideanGaussian(int n, double d, double t) {
  return std::exp(-0.5 * n * std::log(4.0 * kPi * t) - d * d / (4.0 * t));
}

// (H/E - phi_0)/t on S^2, with H/E = e^{-w}.
double sphereFirstQuotient(double d, double t) {
  const double w = excessPotential(ModelSpace::sphere2(), d, t).w;
  const double p0 = phi0(ModelSpace::sphere2(), d);
  return p0 * std::expm1(-w - std::log(p0)) / t;
}

constexpr std::array<double, 4> kSpherePhi1Steps = {0.04, 0.02, 0.01, 0.005};

}  // namespace

namespace cutoff {

double profile(double x) {
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double c = bumpNormalization();
  if (x <= 1.5) return 1.0 - c * bumpIntegral(1.0, x);
  return c * bumpIntegral(x, 2.0);
}

double profilePrime(double x) {
  if (x <= 1.0 || x >= 2.0) return 0.0;
  return -bumpNormalization() * bump(x);
}

double profileSecond(double x) {
  if (x <= 1.0 || x >= 2.0) return 0.0;
  return -bumpNormalization() * bumpPrime(x);
}

}  // namespace cutoff

double smoothCutoff(double s, double r) {
  if (!(r > 0.0)) throw DomainError("smoothCutoff: r must be positive");
  return cutoff::profile(s / r);
}

double smoothCutoffPrime(double s, double r) {
  if (!(r > 0.0)) throw DomainError("smoothCutoffPrime: r must be positive");
  return cutoff::profilePrime(s / r) / r;
}

double smoothCutoffSecond(double s, double r) {
  if (!(r > 0.0)) throw DomainError("smoothCutoffSecond: r must be positive");
  return cutoff::profileSecond(s / r) / (r * r);
}

double phi0(const ModelSpace& m, double d) {
  if (d >= m.injectivityRadius())
    throw DomainError("phi0: distance must be below the injectivity radius of " + m.name());
  return 1.0 / std::sqrt(normalDensity(m, d));
}

double phi1(const ModelSpace& m, double d) {
  if (d >= m.injectivityRadius())
    throw DomainError("phi1: distance must be below the injectivity radius of " + m.name());
  switch (m.kind()) {
    case ModelKind::Euclidean:
    case ModelKind::Circle:
      return 0.0;
    case ModelKind::HyperbolicH3:
      return -m.curvatureScale() * phi0(m, d);
    case ModelKind::Sphere2: {
      std::array<ExtrapolationSample, kSpherePhi1Steps.size()> samples{};
      for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = {kSpherePhi1Steps[i], sphereFirstQuotient(d, kSpherePhi1Steps[i])};
      return richardsonLimit(samples, 1.0).limit;
    }
  }
  throw CapabilityError("phi1: unsupported model " + m.name());
}

int maxCoefficientOrder(const ModelSpace& m) {
  return m.kind() == ModelKind::Sphere2 ? 1 : 64;
}

double phiK(const ModelSpace& m, int k, double d) {
  if (k < 0 || k > maxCoefficientOrder(m))
    throw CapabilityError("phiK: coefficient " + std::to_string(k) + " not available for " + m.name());
  if (k == 0) return phi0(m, d);
  if (k == 1) return phi1(m, d);
  if (m.kind() == ModelKind::HyperbolicH3) {
    double c = phi0(m, d);
    for (int j = 1; j <= k; ++j) c *= -m.curvatureScale() / j;
    return c;
  }
  if (d >= m.injectivityRadius())
    throw DomainError("phiK: distance must be below the injectivity radius of " + m.name());
  return 0.0;
}

ParametrixData ParametrixData::forModel(const ModelSpace& m) { return forModel(m, m.defaultCutoffRadius()); }

ParametrixData ParametrixData::forModel(const ModelSpace& m, double r) {
  if (!(r > 0.0) || !(4.0 * r < m.injectivityRadius()))
    throw ArgumentError("ParametrixData: cutoff radius must satisfy 0 < r < injectivity radius / 4");
  const int n = m.dimension();
  const int N0 = (n + 1) / 2 + 3;
  return {m, r, N0, std::min(N0, maxCoefficientOrder(m))};
}

double truncatedKernel(const ParametrixData& p, double d, double t, int order) {
  if (!(t > 0.0)) throw DomainError("truncatedKernel: t must be positive");
  if (order < 0 || order > maxCoefficientOrder(p.m))
    throw CapabilityError("truncatedKernel: order " + std::to_string(order) + " exceeds the coefficients of " +
                          p.m.name());
  double sum = 0.0, tk = 1.0;
  for (int k = 0; k <= order; ++k) {
    sum += phiK(p.m, k, d) * tk;
    tk *= t;
  }
  return euclideanGaussian(p.m.dimension(), d, t) * sum;
}

double truncatedKernel(const ParametrixData& p, double d, double t) { return truncatedKernel(p, d, t, p.order); }

double parametrixDefect(const ParametrixData& p, double d, double t) {
  if (!(t > 0.0)) throw DomainError("parametrixDefect: t must be positive");
  const double E = euclideanGaussian(p.m.dimension(), d, t);
  switch (p.m.kind()) {
    case ModelKind::Euclidean:
      return 0.0;
    case ModelKind::HyperbolicH3:
      return E * phi0(p.m, d) * expTail(-p.m.curvatureScale() * t, p.order);
    case ModelKind::Circle:
      return E * circleImageTail(d, t);
    case ModelKind::Sphere2: {
      const double w = excessPotential(p.m, d, t).w;
      const double p0 = phi0(p.m, d);
      double defect = p0 * std::expm1(-w - std::log(p0));
      double tk = t;
      for (int k = 1; k <= p.order; ++k, tk *= t) defect -= phiK(p.m, k, d) * tk;
      return E * defect;
    }
  }
  throw CapabilityError("parametrixDefect: unsupported model " + p.m.name());
}

double remainder(const ParametrixData& p, double d, double t) {
  const double eta = p.eta(d);
  const double H = evalKernel(p.m, d, t).H;
  if (eta == 0.0) return H;
  return (1.0 - eta) * H + eta * parametrixDefect(p, d, t);
}

RemainderFit remainderScalingFit(const ParametrixData& p, std::span<const double> dGrid,
                                 std::span<const double> tGrid) {
  std::vector<double> ds;
  for (double d : dGrid)
    if (d >= 0.0 && d <= 0.5 * p.r) ds.push_back(d);
  if (ds.empty()) throw ArgumentError("remainderScalingFit: no grid distance inside B(r/2)");
  if (tGrid.size() < 3) throw ArgumentError("remainderScalingFit: need at least 3 times");

  std::vector<PowerLawPoint> values, rates;
  for (double t : tGrid) {
    if (!(t > 0.0)) throw ArgumentError("remainderScalingFit: times must be positive");
    double supF = 0.0, supDF = 0.0;
    for (double d : ds) {
      const double tilt = std::exp(d * d / (5.0 * t));
      supF = std::max(supF, std::abs(remainder(p, d, t)) * tilt);
      const double rate = centralDiff([&](double s) { return remainder(p, d, s); }, t, t / 10.0);
      supDF = std::max(supDF, std::abs(rate) * tilt);
    }
    if (supF > 1e-300) values.push_back({t, supF});
    if (supDF > 1e-300) rates.push_back({t, supDF});
  }

  RemainderFit fit;
  const double n = p.m.dimension();
  fit.expectedValueExponent = p.order + 1 - n / 2.0;
  fit.expectedDerivativeExponent = p.order - n / 2.0;
  if (values.empty() && rates.empty()) {
    fit.exactZero = true;
    return fit;
  }
  if (values.size() < 3 || rates.size() < 3)
    throw NumericError("remainderScalingFit: remainder underflows on part of the time grid");
  fit.value = fitLogLogSlope(values);
  fit.timeDerivative = fitLogLogSlope(rates);
  return fit;
}

TiltedGaussian::TiltedGaussian(double exponentDivisor) : divisor_(exponentDivisor) {
  if (exponentDivisor != 4.0 && exponentDivisor != 5.0)
    throw ArgumentError("TiltedGaussian: exponent divisor must be 4 or 5");
}

double TiltedGaussian::operator()(int n, double d, double t) const {
  if (!(t > 0.0)) throw DomainError("TiltedGaussian: t must be positive");
  return std::exp(-0.5 * n * std::log(4.0 * kPi * t) - d * d / (divisor_ * t));
}

}  // namespace heatlab
