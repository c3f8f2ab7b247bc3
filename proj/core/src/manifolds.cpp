#include "heatlab/manifolds.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "heatlab/errors.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double logSinh(double s) {
  if (s > 20.0) return s - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * s));
  return std::log(std::sinh(s));
}

void checkRadius(const ModelSpace& m, double rho, const char* op) {
  if (!(rho >= 0.0) || rho > m.injectivityRadius())
    throw DomainError(std::string(op) + ": radius " + std::to_string(rho) +
                      " outside [0, injectivity radius] for " + m.name());
}

// Volume of the curvature -c^2 ball in dimension 3: 4 pi (sinh(2 c r) - 2 c r) / (8 c^3).
double hyperbolicBallVolume3(double c, double r) {
  const double x = c * r;
  double shifted = 0.0;  // sinh(2x) - 2x without cancellation at small x
  if (x < 0.1) {
    const double y = 2.0 * x;
    const double y2 = y * y;
    shifted = y * y2 / 6.0 * (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0 * (1.0 + y2 / 72.0 * (1.0 + y2 / 110.0))));
  } else {
    shifted = std::sinh(2.0 * x) - 2.0 * x;
  }
  return kPi * shifted / (c * c * c);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double parseNumber(std::string_view text, std::string_view selector) {
  // std::from_chars for double is unavailable on older libstdc++; strtod is fine here.
  const std::string copy(text);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size())
    throw ArgumentError("bad model selector '" + std::string(selector) + "'");
  return v;
}

}  // namespace

ModelSpace ModelSpace::euclidean(int n) {
  if (n < 1) throw ArgumentError("euclidean: dimension must be >= 1");
  return {ModelKind::Euclidean, n, 0.0};
}

ModelSpace ModelSpace::hyperbolic3(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ArgumentError("hyperbolic3: curvature scale must be positive");
  return {ModelKind::HyperbolicH3, 3, kappa};
}

ModelSpace ModelSpace::sphere2() { return {ModelKind::Sphere2, 2, 1.0}; }

ModelSpace ModelSpace::circle() { return {ModelKind::Circle, 1, 0.0}; }

double ModelSpace::scalarCurvature() const noexcept {
  switch (kind_) {
    case ModelKind::HyperbolicH3:
      return -6.0 * kappa_;
    case ModelKind::Sphere2:
      return 2.0;
    default:
      return 0.0;
  }
}

double ModelSpace::ricciLowerBound() const noexcept {
  return kind_ == ModelKind::HyperbolicH3 ? 2.0 * kappa_ : 0.0;
}

double ModelSpace::injectivityRadius() const noexcept { return compact() ? kPi : kInf; }

double ModelSpace::defaultCutoffRadius() const noexcept { return compact() ? 0.75 : 1.0; }

bool ModelSpace::compact() const noexcept {
  return kind_ == ModelKind::Sphere2 || kind_ == ModelKind::Circle;
}

std::string ModelSpace::name() const {
  switch (kind_) {
    case ModelKind::Euclidean:
      return "euclidean:" + std::to_string(n_);
    case ModelKind::HyperbolicH3: {
      if (kappa_ == 1.0) return "h3";
      char buf[64];
      std::snprintf(buf, sizeof buf, "h3:%.17g", kappa_);
      return buf;
    }
    case ModelKind::Sphere2:
      return "s2";
    case ModelKind::Circle:
      return "s1";
  }
  return "?";
}

ModelSpace parseModel(std::string_view selector) {
  const std::string s = lower(selector);
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string_view arg =
      colon == std::string::npos ? std::string_view{} : std::string_view(s).substr(colon + 1);
  if (head == "euclidean") {
    if (arg.empty()) throw ArgumentError("euclidean selector needs a dimension, e.g. euclidean:3");
    int n = 0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (ec != std::errc{} || ptr != arg.data() + arg.size())
      throw ArgumentError("bad model selector '" + std::string(selector) + "'");
    return ModelSpace::euclidean(n);
  }
  if (head == "h3") {
    if (colon == std::string::npos) return ModelSpace::hyperbolic3(1.0);
    return ModelSpace::hyperbolic3(parseNumber(arg, selector));
  }
  if (colon == std::string::npos && s == "s2") return ModelSpace::sphere2();
  if (colon == std::string::npos && s == "s1") return ModelSpace::circle();
  throw ArgumentError("unknown model selector '" + std::string(selector) +
                      "' (expected euclidean:<n>, h3[:kappa], s2, s1)");
}

double unitSphereArea(int n) {
  if (n < 1) throw ArgumentError("unitSphereArea: dimension must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double areaDensity(const ModelSpace& m, double rho) {
  checkRadius(m, rho, "areaDensity");
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return unitSphereArea(m.dimension()) * std::pow(rho, m.dimension() - 1);
    case ModelKind::HyperbolicH3: {
      const double sh = std::sinh(std::sqrt(m.curvatureScale()) * rho);
      return 4.0 * kPi * sh * sh / m.curvatureScale();
    }
    case ModelKind::Sphere2:
      return 2.0 * kPi * std::sin(rho);
    case ModelKind::Circle:
      return 2.0;
  }
  return 0.0;
}

double logAreaDensity(const ModelSpace& m, double rho) {
  checkRadius(m, rho, "logAreaDensity");
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return std::log(unitSphereArea(m.dimension())) + (m.dimension() - 1) * std::log(rho);
    case ModelKind::HyperbolicH3:
      return std::log(4.0 * kPi / m.curvatureScale()) +
             2.0 * logSinh(std::sqrt(m.curvatureScale()) * rho);
    case ModelKind::Sphere2:
      return std::log(2.0 * kPi * std::sin(rho));
    case ModelKind::Circle:
      return std::numbers::ln2;
  }
  return 0.0;
}

double areaLogDerivative(const ModelSpace& m, double rho) {
  checkRadius(m, rho, "areaLogDerivative");
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return (m.dimension() - 1) / rho;
    case ModelKind::HyperbolicH3: {
      const double c = std::sqrt(m.curvatureScale());
      return 2.0 * c / std::tanh(c * rho);
    }
    case ModelKind::Sphere2:
      return 1.0 / std::tan(rho);
    case ModelKind::Circle:
      return 0.0;
  }
  return 0.0;
}

double radialAreaLogDerivative(const ModelSpace& m, double rho) {
  checkRadius(m, rho, "radialAreaLogDerivative");
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return m.dimension() - 1;
    case ModelKind::HyperbolicH3: {
      const double s = std::sqrt(m.curvatureScale()) * rho;
      if (s < 1e-4) return 2.0 * (1.0 + s * s / 3.0);
      return 2.0 * s / std::tanh(s);
    }
    case ModelKind::Sphere2:
      if (rho < 1e-4) return 1.0 - rho * rho / 3.0;
      return rho / std::tan(rho);
    case ModelKind::Circle:
      return 0.0;
  }
  return 0.0;
}

double normalDensity(const ModelSpace& m, double d) {
  checkRadius(m, d, "normalDensity");
  switch (m.kind()) {
    case ModelKind::Euclidean:
    case ModelKind::Circle:
      return 1.0;
    case ModelKind::HyperbolicH3: {
      const double s = std::sqrt(m.curvatureScale()) * d;
      if (s < 1e-4) return 1.0 + s * s / 3.0;
      const double ratio = std::sinh(s) / s;
      return ratio * ratio;
    }
    case ModelKind::Sphere2:
      if (d < 1e-4) return 1.0 - d * d / 6.0;
      return std::sin(d) / d;
  }
  return 1.0;
}

double comparisonVolume(const ModelSpace& m, double rho) {
  if (!(rho >= 0.0)) throw DomainError("comparisonVolume: radius must be >= 0");
  const int n = m.dimension();
  const double K = m.ricciLowerBound();
  if (n == 1) return 2.0 * rho;
  if (K == 0.0) return unitSphereArea(n) * std::pow(rho, n) / n;
  const double c = std::sqrt(K / (n - 1));
  if (n == 2) {
    const double sh = std::sinh(0.5 * c * rho);
    return 4.0 * kPi * sh * sh / (c * c);
  }
  if (n == 3) return hyperbolicBallVolume3(c, rho);
  const double omega = unitSphereArea(n);
  auto integrand = [=](double s) { return std::pow(std::sinh(c * s) / c, n - 1); };
  return omega * integrateRadial(integrand, 0.0, rho, 1e-13, {.relTol = 1e-13}).value;
}

double ballVolume(const ModelSpace& m, double rho) {
  if (!(rho >= 0.0)) throw DomainError("ballVolume: radius must be >= 0");
  const double r = std::min(rho, m.injectivityRadius());
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return unitSphereArea(m.dimension()) * std::pow(r, m.dimension()) / m.dimension();
    case ModelKind::HyperbolicH3:
      return hyperbolicBallVolume3(std::sqrt(m.curvatureScale()), r);
    case ModelKind::Sphere2: {
      const double sh = std::sin(0.5 * r);
      return 4.0 * kPi * sh * sh;
    }
    case ModelKind::Circle:
      return 2.0 * r;
  }
  return 0.0;
}

}  // namespace heatlab
