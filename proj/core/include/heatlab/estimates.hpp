#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "heatlab/manifolds.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

/// 2 Delta f - |grad f|^2 + (f - n)/t.
double lypQuantity(const ModelSpace& m, double d, double t);

/// lypQuantity + R(y).
double perelmanResidual(const ModelSpace& m, double d, double t);

/// Richardson limit of perelmanResidual along (d, t) = (d0 h, t0 h),
/// h = 1, 1/2, 1/4, ... (levels points), extrapolated in h with order 1.
RichardsonResult perelmanLimit(const ModelSpace& m, double d0, double t0, int levels = 3);

/// epsilon = t ln H + (n/2) t ln(4 pi t) + d^2/4.
double varadhanResidual(const ModelSpace& m, double d, double t);

/// max |epsilon(t, d)| over `samples` equispaced d in [0, radius].
double varadhanSupNorm(const ModelSpace& m, double t, double radius, int samples = 101);

/// u(., s) = H(., t0 + s) on the window 0 < s <= windowT.
struct ShiftedSolution {
  ModelSpace base;
  double t0;
  double windowT;
  /// H(0, t0), the supremum of u over the window.
  double supBound;
  double logSupBound;

  static ShiftedSolution make(const ModelSpace& m, double t0, double windowT);
};

/// n + (4 + 2Ks) ln(supBound/u) - s (Delta u/u + |grad u|^2/u^2), in log space.
double hamiltonSlack(const ShiftedSolution& sol, double d, double s);

/// s H_t/H + n.
double liYauLowerCheck(const ModelSpace& m, double d, double s);

struct BernsteinReport {
  /// Exponent of sup_d s |Delta u| against s.
  SlopeFit fit;
  std::vector<PowerLawPoint> supremum;
};

BernsteinReport bernsteinScaling(const ShiftedSolution& sol, std::span<const double> dGrid,
                                 std::span<const double> sGrid);

struct SlackReport {
  std::vector<std::pair<double, double>> grid;
  std::vector<double> slack;
  double minSlack = 0.0;
  std::pair<double, double> argmin{0.0, 0.0};
};

/// Evaluates slack(d, t) over the product grid, d varying fastest.
SlackReport scanSlack(std::span<const double> dGrid, std::span<const double> tGrid,
                      const std::function<double(double, double)>& slack);

}  // namespace heatlab
