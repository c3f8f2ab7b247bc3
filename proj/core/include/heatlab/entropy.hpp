#pragma once

#include <span>

#include "heatlab/manifolds.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

struct EntropySample {
  double t = 0.0;
  double N = 0.0;
  double dNdt_direct = 0.0;
  double dNdt_integrand = 0.0;
  /// Absolute quadrature error estimate of the last integral formed.
  double quadError = 0.0;
};

/// N(t) = integral of f H dmu - n/2. Only t and N are filled in.
EntropySample nashEntropy(const ModelSpace& m, double t, double tol = 1e-14);

/// Fills both derivative routes: a Richardson-combined central difference of
/// N (steps t/20 and t/40) and the integral of f H_t - H_t - (n/2t) H.
/// The rate integrand is O(n/2t), so its absolute tolerance is scaled by that.
/// Throws ConsistencyError when they disagree by more than 100 times the
/// combined tolerance plus 10 times the Richardson truncation estimate.
EntropySample entropyDerivative(const ModelSpace& m, double t, double tol = 1e-14);

struct AsymptoticReport {
  double slopeAtZero = 0.0;
  /// -R(y)/2 from the model.
  double predictedSlope = 0.0;
  /// Exponent of |N - predictedSlope t| against t.
  double residualExponent = 0.0;
  double residualStdError = 0.0;
  /// Change of the extrapolated slope when the coarsest time is dropped.
  double extrapolationResidual = 0.0;
  /// |N - predictedSlope t| never rose above the quadrature floor; the
  /// exponent fields are then meaningless.
  bool residualBelowFloor = false;
  std::vector<EntropySample> samples;
};

/// tGrid must be strictly increasing or strictly decreasing, positive, with at
/// least 3 points.
AsymptoticReport entropySlopeAtZero(const ModelSpace& m, std::span<const double> tGrid, double tol = 1e-14);

/// -(1/4t) integral over B(r/2) of d^2 H. r defaults to the model's cutoff
/// radius; r = infinity integrates over the whole space.
double secondMomentFunctional(const ModelSpace& m, double t);
double secondMomentFunctional(const ModelSpace& m, double t, double r);

/// (1/4t^2) integral over B(r/2) of (-f) H d^2.
double fourthMomentFunctional(const ModelSpace& m, double t);
double fourthMomentFunctional(const ModelSpace& m, double t, double r);

struct OuterIntegrals {
  /// Integral over d > r/2 of |f| H.
  double entropyTail = 0.0;
  /// Integral over d > r/2 of |f H_t|.
  double rateTail = 0.0;
};

OuterIntegrals outerIntegralBound(const ModelSpace& m, double t);
OuterIntegrals outerIntegralBound(const ModelSpace& m, double t, double r);

}  // namespace heatlab
