#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "heatlab/entropy.hpp"
#include "heatlab/errors.hpp"
#include "oracles/frozen_values.hpp"

using namespace heatlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral over |x| > r/2 of f H for the 3-d Gaussian, x0 = r/(4 sqrt t).
double euclideanEntropyTail(double t, double r) {
  const double x0 = r / (4.0 * std::sqrt(t));
  const double sqrtPi = std::sqrt(std::numbers::pi);
  return 4.0 / sqrtPi * ((x0 * x0 * x0 / 2 + 3 * x0 / 4) * std::exp(-x0 * x0) + 3 * sqrtPi / 8 * std::erfc(x0));
}

}  // namespace

TEST(NashEntropy, EuclideanVanishes) {
  for (int n : {1, 2, 3, 5})
    for (double t : {1e-4, 1e-2, 1.0}) EXPECT_NEAR(nashEntropy(ModelSpace::euclidean(n), t).N, 0.0, 1e-10);
}

TEST(NashEntropy, HyperbolicOracle) {
  const auto h3 = ModelSpace::hyperbolic3();
  EXPECT_NEAR(nashEntropy(h3, 1e-3).N, oracle::kH3EntropyT1em3, 1e-12);
  EXPECT_NEAR(nashEntropy(h3, 1e-2).N, oracle::kH3EntropyT1em2, 1e-12);
  EXPECT_NEAR(nashEntropy(h3, 1e-1).N, oracle::kH3EntropyT1em1, 1e-12);
  EXPECT_LE(std::abs(nashEntropy(h3, 0.01).N / 0.01 - 3.0), 0.15);
}

TEST(NashEntropy, SphereOracle) {
  const auto s2 = ModelSpace::sphere2();
  EXPECT_NEAR(nashEntropy(s2, 1e-3).N, oracle::kS2EntropyT1em3, 1e-12);
  EXPECT_NEAR(nashEntropy(s2, 1e-2).N, oracle::kS2EntropyT1em2, 1e-12);
  EXPECT_NEAR(nashEntropy(s2, 1e-1).N, oracle::kS2EntropyT1em1, 1e-12);
  EXPECT_LE(std::abs(nashEntropy(s2, 0.01).N / 0.01 + 1.0), 0.15);
}

TEST(NashEntropy, HyperbolicPositiveAndIncreasing) {
  double prev = 0.0;
  for (double t : {1e-4, 1e-3, 3e-3, 6e-3, 1e-2}) {
    const double N = nashEntropy(ModelSpace::hyperbolic3(), t).N;
    EXPECT_GT(N, prev);
    prev = N;
  }
}

TEST(NashEntropy, CircleDecaysFasterThanAnyPower) {
  EXPECT_LE(std::abs(nashEntropy(ModelSpace::circle(), 1e-2).N), 1e-12);
  EXPECT_GT(std::abs(nashEntropy(ModelSpace::circle(), 1.0).N), 1e-3);
}

TEST(NashEntropy, RejectsNonPositiveTime) {
  EXPECT_THROW(nashEntropy(ModelSpace::sphere2(), 0.0), DomainError);
}

TEST(EntropyDerivative, EuclideanZeroByBothRoutes) {
  const auto s = entropyDerivative(ModelSpace::euclidean(3), 1e-2);
  EXPECT_NEAR(s.dNdt_direct, 0.0, 1e-8);
  EXPECT_NEAR(s.dNdt_integrand, 0.0, 1e-8);
}

TEST(EntropyDerivative, HyperbolicRate) {
  const auto s = entropyDerivative(ModelSpace::hyperbolic3(), 1e-3);
  EXPECT_NEAR(s.dNdt_direct, 3.0, 0.1);
  EXPECT_NEAR(s.dNdt_integrand, 3.0, 0.1);
  EXPECT_NEAR(s.dNdt_integrand, oracle::kH3EntropyRateT1em3, 1e-8);
  const auto s2 = entropyDerivative(ModelSpace::hyperbolic3(), 1e-2);
  EXPECT_LE(std::abs(s2.dNdt_direct - s2.dNdt_integrand), 1e-6);
  EXPECT_NEAR(s2.dNdt_integrand, oracle::kH3EntropyRateT1em2, 1e-8);
}

TEST(EntropyDerivative, RoutesAgreeOnEveryModel) {
  for (const auto& m : {ModelSpace::euclidean(2), ModelSpace::hyperbolic3(), ModelSpace::hyperbolic3(4.0),
                        ModelSpace::sphere2(), ModelSpace::circle()}) {
    for (double t : {1e-4, 1e-3, 1e-2, 1e-1}) {
      const auto s = entropyDerivative(m, t);
      EXPECT_LE(std::abs(s.dNdt_direct - s.dNdt_integrand), 1e-6 * std::max(1.0, std::abs(s.dNdt_direct)))
          << m.name() << " t=" << t;
      EXPECT_GE(s.quadError, 0.0);
    }
  }
}

TEST(EntropySlope, MatchesScalarCurvature) {
  const auto grid = makeGrid(1e-4, 1e-2, 9, true);
  for (const auto& m : {ModelSpace::hyperbolic3(), ModelSpace::hyperbolic3(4.0), ModelSpace::sphere2()}) {
    const auto rep = entropySlopeAtZero(m, grid);
    EXPECT_EQ(rep.predictedSlope, -m.scalarCurvature() / 2);
    EXPECT_NEAR(rep.slopeAtZero, rep.predictedSlope, 0.02 * std::abs(rep.predictedSlope)) << m.name();
    EXPECT_FALSE(rep.residualBelowFloor);
    EXPECT_EQ(rep.samples.size(), grid.size());
  }
}

TEST(EntropySlope, EuclideanResidualBelowFloor) {
  const auto rep = entropySlopeAtZero(ModelSpace::euclidean(3), makeGrid(1e-4, 1e-2, 5, true));
  EXPECT_NEAR(rep.slopeAtZero, 0.0, 1e-6);
  EXPECT_TRUE(rep.residualBelowFloor);
}

TEST(EntropySlope, HyperbolicResidualExponent) {
  const auto rep = entropySlopeAtZero(ModelSpace::hyperbolic3(), makeGrid(1e-4, 1e-2, 9, true));
  EXPECT_GE(rep.residualExponent, 1.4);
}

TEST(EntropySlope, GridDirectionDoesNotMatter) {
  auto grid = makeGrid(1e-4, 1e-2, 7, true);
  const auto up = entropySlopeAtZero(ModelSpace::hyperbolic3(), grid);
  std::reverse(grid.begin(), grid.end());
  const auto down = entropySlopeAtZero(ModelSpace::hyperbolic3(), grid);
  EXPECT_NEAR(up.slopeAtZero, down.slopeAtZero, 1e-9);
}

TEST(EntropySlope, RejectsBadGrids) {
  const auto h3 = ModelSpace::hyperbolic3();
  EXPECT_THROW(entropySlopeAtZero(h3, std::vector<double>{1e-3, 1e-2, 5e-3}), ArgumentError);
  EXPECT_THROW(entropySlopeAtZero(h3, std::vector<double>{1e-3, 1e-2}), ArgumentError);
  EXPECT_THROW(entropySlopeAtZero(h3, std::vector<double>{1e-3, 1e-3, 1e-2}), ArgumentError);
}

TEST(MomentFunctionals, EuclideanWholeSpace) {
  const auto e3 = ModelSpace::euclidean(3);
  EXPECT_NEAR(secondMomentFunctional(e3, 1e-2, kInf), -1.5, 1e-12);
  EXPECT_NEAR(fourthMomentFunctional(e3, 1e-2, kInf), -15.0 / (4 * 1e-2), 1e-9);
}

TEST(MomentFunctionals, HyperbolicAndSphereExpansions) {
  const double t = 1e-3;
  const auto h3 = ModelSpace::hyperbolic3();
  const auto s2 = ModelSpace::sphere2();
  EXPECT_NEAR(secondMomentFunctional(h3, t), oracle::kH3SecondMomentT1em3, 1e-12);
  EXPECT_NEAR(secondMomentFunctional(s2, t), oracle::kS2SecondMomentT1em3, 1e-12);
  EXPECT_NEAR(fourthMomentFunctional(h3, t), oracle::kH3FourthMomentT1em3, 1e-9);
  EXPECT_NEAR(fourthMomentFunctional(s2, t), oracle::kS2FourthMomentT1em3, 1e-9);
  EXPECT_NEAR(secondMomentFunctional(h3, t), -1.5 - t, 3 * std::pow(t, 1.5));
  EXPECT_NEAR(secondMomentFunctional(s2, t), -1.0 + t / 3, 3 * std::pow(t, 1.5));
  EXPECT_NEAR(fourthMomentFunctional(h3, t) + 15.0 / (4 * t), -9.0, 0.5);
  EXPECT_NEAR(fourthMomentFunctional(s2, t) + 8.0 / (4 * t), 7.0 / 3.0, 0.5);
}

TEST(MomentFunctionals, CutoffInsensitiveAtLeadingOrder) {
  const auto h3 = ModelSpace::hyperbolic3();
  EXPECT_NEAR(secondMomentFunctional(h3, 1e-3, 1.0), secondMomentFunctional(h3, 1e-3, 0.8), 1e-12);
}

TEST(OuterIntegrals, EuclideanGaussianTail) {
  const auto e3 = ModelSpace::euclidean(3);
  for (double t : {1e-2, 3e-2}) {
    const double oracleTail = euclideanEntropyTail(t, 1.0);
    EXPECT_NEAR(outerIntegralBound(e3, t).entropyTail, oracleTail, 1e-9 * oracleTail) << t;
  }
  const auto tail = outerIntegralBound(e3, 1e-3, 1.5);
  EXPECT_LT(tail.entropyTail, 1e-30);
  EXPECT_LT(tail.rateTail, 1e-30);
}

TEST(OuterIntegrals, HyperbolicExponents) {
  std::vector<PowerLawPoint> a, b;
  for (double t : makeGrid(1e-3, 1e-2, 6, true)) {
    const auto o = outerIntegralBound(ModelSpace::hyperbolic3(), t);
    a.push_back({t, o.entropyTail});
    b.push_back({t, o.rateTail});
  }
  EXPECT_GE(fitLogLogSlope(a).slope, 1.4);
  EXPECT_GE(fitLogLogSlope(b).slope, 0.4);
}
