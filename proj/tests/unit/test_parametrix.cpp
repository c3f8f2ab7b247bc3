#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "heatlab/errors.hpp"
#include "heatlab/kernels.hpp"
#include "heatlab/parametrix.hpp"
#include "unit/generators.hpp"

using namespace heatlab;

namespace {

double euclideanE(int n, double d, double t) {
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-d * d / (4.0 * t));
}

}  // namespace

TEST(SmoothCutoff, PlateauAndSupport) {
  for (double r : {0.25, 0.75, 1.0, 3.0}) {
    EXPECT_EQ(smoothCutoff(r / 2, r), 1.0);
    EXPECT_EQ(smoothCutoff(r, r), 1.0);
    EXPECT_EQ(smoothCutoff(2 * r, r), 0.0);
    EXPECT_EQ(smoothCutoff(3 * r, r), 0.0);
  }
  EXPECT_THROW(smoothCutoff(0.1, 0.0), DomainError);
}

TEST(SmoothCutoff, ProfileBoundsOnDenseSample) {
  double maxSlope = 0.0, maxCombo = 0.0, prev = 1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = 1.0 + i / 10000.0;
    const double v = cutoff::profile(x), d1 = cutoff::profilePrime(x), d2 = cutoff::profileSecond(x);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_LE(v, prev + 1e-15);
    prev = v;
    maxSlope = std::max(maxSlope, std::abs(d1));
    if (v > 0.0) maxCombo = std::max(maxCombo, std::abs(d2) + d1 * d1 / v);
  }
  EXPECT_LE(maxSlope, 2.0);
  EXPECT_LE(maxCombo, 16.0);
}

TEST(SmoothCutoff, DerivativesMatchDifferenceQuotients) {
  const double r = 0.75, h = 1e-6;
  for (double s : {0.8, 1.0, 1.2, 1.4}) {
    EXPECT_NEAR(smoothCutoffPrime(s, r), centralDiff([&](double x) { return smoothCutoff(x, r); }, s, h), 1e-6);
    EXPECT_NEAR(smoothCutoffSecond(s, r),
                centralDiff([&](double x) { return smoothCutoffPrime(x, r); }, s, h), 1e-5);
  }
}

TEST(Phi0, Examples) {
  for (const auto& m : {ModelSpace::euclidean(3), ModelSpace::hyperbolic3(), ModelSpace::sphere2(), ModelSpace::circle()})
    EXPECT_NEAR(phi0(m, 1e-9), 1.0, 1e-15) << m.name();
  for (double d : {0.1, 0.5, 1.5}) EXPECT_NEAR(phi0(ModelSpace::hyperbolic3(), d), d / std::sinh(d), 1e-15);
  // phi0 = 1 - d^2/6 + O(d^4) for H^3.
  for (double d : {1e-2, 3e-3, 1e-3}) {
    const double c2 = (phi0(ModelSpace::hyperbolic3(), d) - 1.0) / (d * d);
    EXPECT_NEAR(c2, -1.0 / 6.0, d * d);
  }
  EXPECT_THROW(phi0(ModelSpace::sphere2(), 4.0), DomainError);
}

TEST(Phi0, LowerBoundsOnCutoffBalls) {
  for (const auto& m : {ModelSpace::euclidean(3), ModelSpace::hyperbolic3(), ModelSpace::hyperbolic3(4.0),
                        ModelSpace::sphere2(), ModelSpace::circle()}) {
    const auto p = ParametrixData::forModel(m);
    for (int i = 0; i <= 200; ++i) {
      const double d = 2 * p.r * i / 200.0;
      EXPECT_GT(phi0(m, d), 0.0) << m.name();
      if (d <= p.r / 2) EXPECT_GE(phi0(m, d), 0.5) << m.name();
    }
  }
}

TEST(Phi1, ValuesAtBasePoint) {
  EXPECT_EQ(phi1(ModelSpace::euclidean(3), 0.4), 0.0);
  EXPECT_NEAR(phi1(ModelSpace::hyperbolic3(), 0.0), -1.0, 1e-15);
  EXPECT_NEAR(phi1(ModelSpace::hyperbolic3(), 0.3), -phi0(ModelSpace::hyperbolic3(), 0.3), 1e-15);
  EXPECT_NEAR(phi1(ModelSpace::sphere2(), 0.0), 1.0 / 3.0, 5e-3);
  for (const auto& m : {ModelSpace::euclidean(2), ModelSpace::hyperbolic3(2.0), ModelSpace::sphere2()})
    EXPECT_NEAR(phi1(m, 0.0), m.scalarCurvature() / 6.0, 5e-3) << m.name();
}

TEST(Phi1, SphereAgreesWithDirectKernelFit) {
  // (H/E - phi0)/t -> phi1 as t -> 0, linear in t.
  const auto s2 = ModelSpace::sphere2();
  const double d = 0.1;
  std::vector<ExtrapolationSample> samples;
  for (double t : {4e-3, 2e-3, 1e-3, 5e-4})
    samples.push_back({t, (evalKernel(s2, d, t).H / euclideanE(2, d, t) - phi0(s2, d)) / t});
  const double fit = richardsonLimit(samples, 1.0).limit;
  EXPECT_NEAR(fit, 1.0 / 3.0, 5e-3);
  EXPECT_NEAR(phi1(s2, d), fit, 1e-4);
}

TEST(PhiK, AvailabilityPerModel) {
  EXPECT_EQ(maxCoefficientOrder(ModelSpace::sphere2()), 1);
  EXPECT_GE(maxCoefficientOrder(ModelSpace::hyperbolic3()), 5);
  EXPECT_THROW(phiK(ModelSpace::sphere2(), 2, 0.1), CapabilityError);
  EXPECT_NEAR(phiK(ModelSpace::hyperbolic3(2.0), 3, 0.2), -8.0 / 6.0 * phi0(ModelSpace::hyperbolic3(2.0), 0.2),
              1e-15);
  EXPECT_EQ(phiK(ModelSpace::euclidean(3), 4, 0.2), 0.0);
}

TEST(ParametrixData, TruncationOrder) {
  EXPECT_EQ(ParametrixData::forModel(ModelSpace::hyperbolic3()).N0, 5);
  EXPECT_EQ(ParametrixData::forModel(ModelSpace::sphere2()).N0, 4);
  EXPECT_EQ(ParametrixData::forModel(ModelSpace::circle()).N0, 4);
  EXPECT_EQ(ParametrixData::forModel(ModelSpace::sphere2()).order, 1);
  for (int n = 1; n <= 9; ++n) {
    const auto p = ParametrixData::forModel(ModelSpace::euclidean(n));
    EXPECT_GE(p.N0 + 1 - 0.5 * n, 4.0);
    EXPECT_EQ(p.N0, (n + 1) / 2 + 3);
  }
  EXPECT_THROW(ParametrixData::forModel(ModelSpace::sphere2(), 0.8), ArgumentError);
  EXPECT_THROW(ParametrixData::forModel(ModelSpace::hyperbolic3(), 0.0), ArgumentError);
}

TEST(TruncatedKernel, EuclideanOrderZeroIsGaussian) {
  const auto p = ParametrixData::forModel(ModelSpace::euclidean(3));
  for (double d : {0.0, 0.3, 1.7})
    for (double t : {1e-3, 0.2}) {
      // At d = 1.7, t = 1e-3 the value is subnormal and carries fewer digits.
      const double E = euclideanE(3, d, t);
      EXPECT_NEAR(truncatedKernel(p, d, t, 0), E, 1e-14 * E + 1e4 * std::numeric_limits<double>::denorm_min());
    }
}

TEST(TruncatedKernel, HyperbolicAlternatingSeriesBound) {
  const auto p = ParametrixData::forModel(ModelSpace::hyperbolic3());
  const double fact = std::tgamma(p.N0 + 2.0);
  for (double t : {1e-3, 1e-2, 0.1, 0.5})
    for (int i = 0; i <= 20; ++i) {
      const double d = p.r / 2 * i / 20.0;
      const double bound = euclideanE(3, d, t) * std::pow(t, p.N0 + 1) / fact;
      const double H = evalKernel(p.m, d, t).H;
      EXPECT_LE(std::abs(parametrixDefect(p, d, t)), bound * (1 + 1e-9) + 1e-300);
      // The direct difference is limited by rounding in exp(-d^2/4t).
      const double rounding = 4 * std::numeric_limits<double>::epsilon() * (1 + d * d / (4 * t)) * H;
      EXPECT_LE(std::abs(truncatedKernel(p, d, t) - H), bound + rounding);
    }
}

TEST(TruncatedKernel, ApproachesKernelAsTimeShrinks) {
  for (const auto& m : {ModelSpace::hyperbolic3(), ModelSpace::sphere2(), ModelSpace::circle()}) {
    const auto p = ParametrixData::forModel(m);
    // Beyond a few sqrt(t) both sides underflow, so distances scale with sqrt(t).
    const double t = 1e-5;
    for (double d : {0.0, 2.0 * std::sqrt(t), 6.0 * std::sqrt(t)})
      EXPECT_NEAR(truncatedKernel(p, d, t) / evalKernel(m, d, t).H, 1.0, 1e-6) << m.name();
  }
}

TEST(TruncatedKernel, OrderBeyondCoefficients) {
  const auto p = ParametrixData::forModel(ModelSpace::sphere2());
  EXPECT_THROW(truncatedKernel(p, 0.1, 0.01, 2), CapabilityError);
  EXPECT_THROW(truncatedKernel(p, 0.1, 0.0), DomainError);
}

TEST(Remainder, OutsideCutoffEqualsKernel) {
  for (const auto& m : {ModelSpace::hyperbolic3(), ModelSpace::sphere2(), ModelSpace::circle()}) {
    const auto p = ParametrixData::forModel(m);
    for (double d : {2 * p.r, 2.5 * p.r}) EXPECT_EQ(remainder(p, d, 0.05), evalKernel(m, d, 0.05).H);
  }
}

TEST(Remainder, EuclideanIsExactlyZeroInsideCutoff) {
  const auto p = ParametrixData::forModel(ModelSpace::euclidean(3));
  for (double d : {0.0, 0.2, 0.99}) EXPECT_EQ(remainder(p, d, 0.01), 0.0);
}

TEST(Remainder, DefectMatchesSubtraction) {
  // Where no cancellation is possible the defect equals the naive difference.
  for (const auto& m : {ModelSpace::hyperbolic3(), ModelSpace::sphere2(), ModelSpace::circle()}) {
    const auto p = ParametrixData::forModel(m);
    for (double d : {0.0, 0.2 * p.r}) {
      const double t = 0.3;
      const double naive = evalKernel(m, d, t).H - truncatedKernel(p, d, t);
      EXPECT_NEAR(parametrixDefect(p, d, t), naive, 1e-9 * std::abs(evalKernel(m, d, t).H)) << m.name();
    }
  }
}

TEST(Remainder, HyperbolicDecayAtFixedDistance) {
  const auto p = ParametrixData::forModel(ModelSpace::hyperbolic3());
  std::vector<PowerLawPoint> pts;
  for (double t : makeGrid(1e-3, 1e-1, 9, true)) pts.push_back({t, std::abs(remainder(p, 0.3, t))});
  EXPECT_GE(fitLogLogSlope(pts).slope, 4.0);
}

TEST(RemainderScalingFit, Hyperbolic) {
  const auto p = ParametrixData::forModel(ModelSpace::hyperbolic3());
  const auto ds = makeGrid(0.0, p.r / 2, 11, false);
  const auto ts = makeGrid(1e-3, 1e-1, 9, true);
  const auto fit = remainderScalingFit(p, ds, ts);
  EXPECT_FALSE(fit.exactZero);
  EXPECT_GE(fit.value.slope, 4.0);
  EXPECT_GE(fit.timeDerivative.slope, 2.0);
  EXPECT_EQ(fit.expectedValueExponent, 4.5);
  EXPECT_EQ(fit.expectedDerivativeExponent, 3.5);
}

TEST(RemainderScalingFit, SphereFirstOrder) {
  const auto p = ParametrixData::forModel(ModelSpace::sphere2());
  const auto fit = remainderScalingFit(p, makeGrid(0.0, p.r / 2, 7, false), makeGrid(1e-3, 1e-1, 7, true));
  EXPECT_EQ(fit.expectedValueExponent, 1.0);
  EXPECT_GE(fit.value.slope, fit.expectedValueExponent - 0.1);
}

TEST(RemainderScalingFit, EuclideanExactZero) {
  const auto p = ParametrixData::forModel(ModelSpace::euclidean(3));
  const auto fit = remainderScalingFit(p, makeGrid(0.0, 0.5, 5, false), makeGrid(1e-3, 1e-1, 5, true));
  EXPECT_TRUE(fit.exactZero);
}

TEST(RemainderScalingFit, DegenerateGrids) {
  const auto p = ParametrixData::forModel(ModelSpace::hyperbolic3());
  const std::vector<double> ts = {1e-3, 1e-2, 1e-1};
  EXPECT_THROW(remainderScalingFit(p, std::vector<double>{0.9}, ts), ArgumentError);
  EXPECT_THROW(remainderScalingFit(p, std::vector<double>{0.1}, std::vector<double>{1e-3, 1e-2}), ArgumentError);
}

TEST(Remainder, LogRatioScaling) {
  // |ln(H/H_N) H| on B(r/2) scales at least like t^4.
  const auto p = ParametrixData::forModel(ModelSpace::hyperbolic3());
  std::vector<PowerLawPoint> pts;
  for (double t : makeGrid(2e-3, 1e-1, 7, true)) {
    double sup = 0.0;
    for (double d : makeGrid(0.0, p.r / 2, 11, false)) {
      const double H = evalKernel(p.m, d, t).H;
      sup = std::max(sup, std::abs(std::log1p(parametrixDefect(p, d, t) / truncatedKernel(p, d, t)) * H) *
                              std::exp(d * d / (5 * t)));
    }
    pts.push_back({t, sup});
  }
  const auto fit = fitLogLogSlope(pts);
  EXPECT_GE(fit.slope, 4.0);
  // Halving the window keeps the fitted constant stable.
  const std::vector<PowerLawPoint> half(pts.begin() + 3, pts.end());
  EXPECT_NEAR(fitLogLogSlope(half).slope, fit.slope, 0.1);
}

TEST(TiltedGaussian, Divisors) {
  EXPECT_THROW(TiltedGaussian(3.0), ArgumentError);
  const TiltedGaussian e(4.0), et(5.0);
  EXPECT_NEAR(e(3, 0.4, 0.02), euclideanE(3, 0.4, 0.02), 1e-14 * euclideanE(3, 0.4, 0.02));
  EXPECT_GT(et(3, 0.4, 0.02), e(3, 0.4, 0.02));
  EXPECT_EQ(et(3, 0.0, 0.02), e(3, 0.0, 0.02));
}
