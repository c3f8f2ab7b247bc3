#pragma once

#include <span>

#include "heatlab/manifolds.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

/// Cutoff profile phi on the normalized argument x = s/r: 1 for x <= 1,
/// 0 for x >= 2, smooth and nonincreasing in between. Built as
/// 1 - c * integral_1^x B with B a plateau bump of exp(-1/x) steps.
namespace cutoff {
double profile(double x);
double profilePrime(double x);
double profileSecond(double x);
}  // namespace cutoff

/// eta(s) = profile(s / r).
double smoothCutoff(double s, double r);
double smoothCutoffPrime(double s, double r);
double smoothCutoffSecond(double s, double r);

double phi0(const ModelSpace& m, double d);
/// phi_1(0) = R(y)/6. Sphere2 is extrapolated from the exact kernel.
double phi1(const ModelSpace& m, double d);
/// Coefficient phi_k where known exactly (Euclidean, Circle, H^3), phi_0 and
/// phi_1 everywhere; CapabilityError otherwise.
double phiK(const ModelSpace& m, int k, double d);
/// Highest k for which phiK is available.
int maxCoefficientOrder(const ModelSpace& m);

struct ParametrixData {
  ModelSpace m;
  double r;
  /// ceil(n/2) + 3.
  int N0;
  /// Truncation order actually used: min(N0, maxCoefficientOrder(m)).
  int order;

  static ParametrixData forModel(const ModelSpace& m);
  static ParametrixData forModel(const ModelSpace& m, double r);

  double eta(double s) const { return smoothCutoff(s, r); }
};

/// E(d, t) * sum_{k <= order} phi_k(d) t^k.
double truncatedKernel(const ParametrixData& p, double d, double t, int order);
double truncatedKernel(const ParametrixData& p, double d, double t);

/// H - H_order at truncation order p.order, formed without cancellation
/// wherever the model allows (exact tails for Euclidean, Circle and H^3).
double parametrixDefect(const ParametrixData& p, double d, double t);

/// F = H - eta(d) H_{order}.
double remainder(const ParametrixData& p, double d, double t);

struct RemainderFit {
  /// Exponent of sup_{d <= r/2} |F| e^{d^2/5t} against t.
  SlopeFit value;
  /// Same for dF/dt.
  SlopeFit timeDerivative;
  /// Every sup fell below 1e-300; the fits are left empty.
  bool exactZero = false;
  /// N + 1 - n/2 and N - n/2 for the truncation order in use.
  double expectedValueExponent = 0.0;
  double expectedDerivativeExponent = 0.0;
};

RemainderFit remainderScalingFit(const ParametrixData& p, std::span<const double> dGrid,
                                 std::span<const double> tGrid);

/// (4 pi t)^{-n/2} exp(-d^2 / (divisor t)) with divisor 4 (E) or 5 (tilde E).
class TiltedGaussian {
 public:
  explicit TiltedGaussian(double exponentDivisor);
  double exponentDivisor() const noexcept { return divisor_; }
  double operator()(int n, double d, double t) const;

 private:
  double divisor_;
};

}  // namespace heatlab
