#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "heatlab/errors.hpp"
#include "heatlab/estimates.hpp"
#include "heatlab/kernels.hpp"
#include "oracles/frozen_values.hpp"

using namespace heatlab;

namespace {

constexpr double kPi = std::numbers::pi;

double minOver(std::span<const double> ds, std::span<const double> ts, const std::function<double(double, double)>& g) {
  return scanSlack(ds, ts, g).minSlack;
}

}  // namespace

TEST(LypQuantity, EuclideanEqualityCase) {
  for (int n : {1, 2, 3, 6})
    for (double t : {1e-4, 1e-3, 0.1, 1.0})
      for (double d : {0.0, 0.01, 0.5, 3.0, 10.0}) EXPECT_NEAR(lypQuantity(ModelSpace::euclidean(n), d, t), 0.0, 1e-12);
}

TEST(LypQuantity, NonPositiveOnNonnegativeRicci) {
  const auto ts = makeGrid(1e-3, 1.0, 13, true);
  for (const auto& m : {ModelSpace::sphere2(), ModelSpace::circle()}) {
    auto ds = makeGrid(0.0, 3.0, 31, false);
    ds.push_back(kPi);
    for (double t : ts)
      for (double d : ds) EXPECT_LE(lypQuantity(m, d, t), 1e-8) << m.name() << " d=" << d << " t=" << t;
  }
}

TEST(LypQuantity, HighPrecisionOracles) {
  EXPECT_NEAR(lypQuantity(ModelSpace::hyperbolic3(), 1e-2, 1e-3), oracle::kH3LypD1em2T1em3, 1e-9);
  EXPECT_NEAR(lypQuantity(ModelSpace::sphere2(), 0.5, 0.05), oracle::kS2LypD05T5em2, 1e-9);
  EXPECT_NEAR(lypQuantity(ModelSpace::sphere2(), 2.0, 0.02), oracle::kS2LypD2T2em2, 1e-8);
}

TEST(LypQuantity, HyperbolicLimitAtOrigin) {
  // f = d^2/4t + t - ln(d/sinh d) gives lyp = 3 + d^2/2t + O(t + d^2), so the
  // limit is 3 only along paths with d^2 = o(t).
  EXPECT_NEAR(lypQuantity(ModelSpace::hyperbolic3(), 0.0, 1e-5), 3.0, 1e-4);
  EXPECT_NEAR(lypQuantity(ModelSpace::hyperbolic3(), 1e-3, 1e-5), 3.05, 1e-4);
  EXPECT_NEAR(lypQuantity(ModelSpace::hyperbolic3(), 1e-4, 1e-5), 3.0005, 1e-4);
}

TEST(PerelmanResidual, EuclideanVanishes) {
  EXPECT_NEAR(perelmanResidual(ModelSpace::euclidean(3), 0.3, 0.01), 0.0, 1e-12);
}

TEST(PerelmanResidual, HyperbolicGap) {
  const auto h3 = ModelSpace::hyperbolic3();
  const double v = perelmanResidual(h3, 1e-2, 1e-3);
  EXPECT_LE(v, -2.5);
  EXPECT_LE(std::abs(v + 3.0), 0.3);
  EXPECT_NEAR(perelmanLimit(h3, 1e-2, 1e-3).limit, -3.0, 0.2);
  EXPECT_NEAR(perelmanLimit(h3, 1e-2, 1e-3, 5).limit, -3.0, 1e-3);
}

TEST(PerelmanResidual, SphereIsFinite) {
  const double v = perelmanResidual(ModelSpace::sphere2(), 1e-2, 1e-3);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_THROW(perelmanLimit(ModelSpace::sphere2(), 1e-2, 1e-3, 2), ArgumentError);
}

TEST(VaradhanResidual, EuclideanExact) {
  for (double d : {0.0, 1.0, 4.0}) EXPECT_EQ(varadhanResidual(ModelSpace::euclidean(3), d, 0.01), 0.0);
}

TEST(VaradhanResidual, HyperbolicExpansion) {
  const double t = 1e-3;
  const double eps = varadhanResidual(ModelSpace::hyperbolic3(), 1.0, t);
  EXPECT_LE(std::abs(eps), 0.01);
  EXPECT_NEAR(eps, t * std::log(1.0 / std::sinh(1.0)) - t * t, 1e-15);
  // Agrees with the definition t ln H + (n/2) t ln(4 pi t) + d^2/4.
  const double viaLog = t * evalKernel(ModelSpace::hyperbolic3(), 1.0, t).logH + 1.5 * t * std::log(4 * kPi * t) + 0.25;
  EXPECT_NEAR(eps, viaLog, 1e-12);
}

TEST(VaradhanResidual, UniformDecay) {
  const auto h3 = ModelSpace::hyperbolic3();
  EXPECT_LE(varadhanSupNorm(h3, 1e-3, 1.0), 0.01);
  std::vector<PowerLawPoint> pts;
  for (double t : makeGrid(1e-4, 1e-1, 7, true)) pts.push_back({t, varadhanSupNorm(h3, t, 1.0)});
  EXPECT_GE(fitLogLogSlope(pts).slope, 0.9);
  EXPECT_LE(varadhanSupNorm(ModelSpace::sphere2(), 1e-3, 0.75), 0.01);
  EXPECT_THROW(varadhanSupNorm(h3, 1e-3, 1.0, 1), ArgumentError);
}

TEST(HamiltonSlack, CentreHasSlackAtLeastDimension) {
  for (const auto& m : {ModelSpace::euclidean(3), ModelSpace::hyperbolic3(), ModelSpace::sphere2(), ModelSpace::circle()}) {
    const auto sol = ShiftedSolution::make(m, 0.05, 0.05);
    for (double s : {1e-4, 1e-2, 0.05}) EXPECT_GE(hamiltonSlack(sol, 0.0, s), m.dimension()) << m.name();
  }
}

TEST(HamiltonSlack, EuclideanClosedForm) {
  const int n = 3;
  const double t0 = 0.05;
  const auto sol = ShiftedSolution::make(ModelSpace::euclidean(n), t0, 0.05);
  for (double s : {1e-3, 0.02, 0.05})
    for (double d : {0.0, 0.3, 1.0, 2.5}) {
      const double tau = t0 + s;
      const double expected =
          n + 2 * n * std::log(tau / t0) + d * d / tau - s * (-n / (2 * tau) + d * d / (2 * tau * tau));
      EXPECT_NEAR(hamiltonSlack(sol, d, s), expected, 1e-10 * (1 + std::abs(expected)));
    }
}

TEST(HamiltonSlack, NonNegativeOnAllModels) {
  const auto ss = makeGrid(1e-4, 0.05, 12, true);
  for (const auto& m : {ModelSpace::euclidean(3), ModelSpace::hyperbolic3(), ModelSpace::hyperbolic3(4.0),
                        ModelSpace::sphere2(), ModelSpace::circle()}) {
    for (double t0 : {1e-3, 0.05, 0.5}) {
      const auto sol = ShiftedSolution::make(m, t0, 0.05);
      auto ds = makeGrid(0.0, m.compact() ? kPi : 3.0, 31, false);
      const auto rep = scanSlack(ds, ss, [&](double d, double s) { return hamiltonSlack(sol, d, s); });
      EXPECT_GE(rep.minSlack, -1e-8) << m.name() << " t0=" << t0;
    }
  }
  EXPECT_THROW(hamiltonSlack(ShiftedSolution::make(ModelSpace::circle(), 0.1, 0.05), 0.1, 0.06), DomainError);
}

TEST(LiYauLower, EuclideanClosedForm) {
  for (double s : {1e-3, 0.1})
    for (double d : {0.0, 0.5, 2.0})
      EXPECT_NEAR(liYauLowerCheck(ModelSpace::euclidean(3), d, s), 1.5 + d * d / (4 * s), 1e-12 * (1 + d * d / s));
}

TEST(LiYauLower, InfimumStableUnderRefinement) {
  for (const auto& m : {ModelSpace::hyperbolic3(), ModelSpace::sphere2()}) {
    auto infimum = [&](int k) {
      const auto ds = makeGrid(0.0, 3.0, 10 * k + 1, false);
      const auto ss = makeGrid(1e-3, 1.0, 6 * k + 1, true);
      return minOver(ds, ss, [&](double d, double s) { return liYauLowerCheck(m, d, s); });
    };
    const double coarse = infimum(1), fine = infimum(2);
    EXPECT_TRUE(std::isfinite(coarse));
    EXPECT_NEAR(fine, coarse, 0.01 * std::abs(coarse)) << m.name();
  }
}

TEST(Bernstein, BoundedAsWindowShrinks) {
  const auto ds = makeGrid(0.0, 2.0, 21, false);
  const auto ss = makeGrid(1e-4, 0.1, 7, true);
  for (const auto& m : {ModelSpace::euclidean(3), ModelSpace::hyperbolic3()}) {
    const auto rep = bernsteinScaling(ShiftedSolution::make(m, 0.1, 0.1), ds, ss);
    EXPECT_GE(rep.fit.slope, 0.0) << m.name();
    for (std::size_t i = 1; i < rep.supremum.size(); ++i) EXPECT_GT(rep.supremum[i].y, rep.supremum[i - 1].y);
  }
}

TEST(Bernstein, VanishesAtFixedDistance) {
  const auto sol = ShiftedSolution::make(ModelSpace::hyperbolic3(), 0.1, 0.1);
  const auto k = evalKernel(sol.base, 0.5, sol.t0);
  for (double s : {1e-4, 1e-6})
    EXPECT_NEAR(s * std::abs(evalKernel(sol.base, 0.5, sol.t0 + s).laplacianH), s * std::abs(k.laplacianH),
                1e-2 * s * std::abs(k.laplacianH));
  EXPECT_THROW(bernsteinScaling(sol, std::vector<double>{0.1}, std::vector<double>{1e-3, 1e-2}), ArgumentError);
}

TEST(ScanSlack, ReportsMinimumAndArgmin) {
  const std::vector<double> ds = {0.0, 1.0, 2.0}, ts = {0.1, 0.2};
  const auto rep = scanSlack(ds, ts, [](double d, double t) { return (d - 1.0) * (d - 1.0) + t; });
  ASSERT_EQ(rep.slack.size(), 6u);
  EXPECT_EQ(rep.grid[1], std::make_pair(1.0, 0.1));
  EXPECT_DOUBLE_EQ(rep.minSlack, 0.1);
  EXPECT_EQ(rep.argmin, std::make_pair(1.0, 0.1));
  EXPECT_DOUBLE_EQ(rep.minSlack, *std::min_element(rep.slack.begin(), rep.slack.end()));
}

TEST(ScanSlack, NanIsNeverHidden) {
  const std::vector<double> ds = {0.0, 1.0, 2.0}, ts = {0.1};
  const auto rep = scanSlack(ds, ts, [](double d, double) {
    return d == 1.0 ? std::numeric_limits<double>::quiet_NaN() : -d;
  });
  EXPECT_TRUE(std::isnan(rep.minSlack));
  EXPECT_THROW(scanSlack(std::vector<double>{}, ts, [](double, double) { return 0.0; }), ArgumentError);
}

TEST(ScanSlack, GridOrderIndependent) {
  auto ds = makeGrid(0.0, 3.0, 13, false);
  const auto ts = makeGrid(1e-3, 0.1, 5, true);
  auto g = [](double d, double t) { return lypQuantity(ModelSpace::sphere2(), d, t); };
  const double a = scanSlack(ds, ts, g).minSlack;
  std::reverse(ds.begin(), ds.end());
  EXPECT_EQ(scanSlack(ds, ts, g).minSlack, a);
}
