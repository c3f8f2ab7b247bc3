#pragma once

#include <functional>

#include "heatlab/manifolds.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

/// The heat kernel in Gaussian-relative form: f = d^2/(4t) + w, so that
/// H = (4 pi t)^{-n/2} exp(-d^2/(4t) - w). w stays O(1) where H underflows,
/// which is what lets every log-space quantity be evaluated far from the
/// diagonal.
struct ExcessPotential {
  double w = 0.0;
  double dw_dd = 0.0;
  double d2w_dd2 = 0.0;
  double dw_dt = 0.0;
};

struct KernelSample {
  double d = 0.0;
  double t = 0.0;
  double H = 0.0;
  double dH_dt = 0.0;
  double dH_dd = 0.0;
  double d2H_dd2 = 0.0;
  double laplacianH = 0.0;
  /// f = -ln((4 pi t)^{n/2} H), finite even where H underflows.
  double f = 0.0;
  double logH = 0.0;
  double df_dt = 0.0;
  double df_dd = 0.0;
  double d2f_dd2 = 0.0;
  double laplacianF = 0.0;
};

ExcessPotential excessPotential(const ModelSpace& m, double d, double t);

KernelSample evalKernel(const ModelSpace& m, double d, double t);

/// t * ln H(d, t).
double logKernelScaled(const ModelSpace& m, double d, double t);

/// Radius beyond which H * A * (polynomial weights up to (d^2/t)^3 / t) is
/// below tol * 1e-3; never exceeds the injectivity radius.
double kernelTruncationRadius(const ModelSpace& m, double t, double tol);

/// Integrates multiplier(sample) * H(rho, t) * A(rho) over [lower, upper],
/// with upper clipped to kernelTruncationRadius. H * A is formed in log space.
QuadratureResult integrateAgainstKernel(const ModelSpace& m, double t,
                                        const std::function<double(const KernelSample&)>& multiplier,
                                        double lower, double upper, double tol,
                                        double relTol = 0.0);

/// Integral of H(., t) over the whole model; 1 up to quadrature error.
double totalMass(const ModelSpace& m, double t, double tol);

namespace sphere {

/// Eigenseries truncation index for S^2 at time t and tolerance tol.
int seriesCutoff(double t, double tol);

/// H on S^2 by the eigenseries alone (no representation switch).
double seriesKernel(double theta, double t, double tol = 1e-16);

/// Excess potential on S^2 from each exact representation; exposed so the two
/// can be cross-checked where both are accurate.
ExcessPotential fromSeries(double theta, double t, double tol = 1e-16);
ExcessPotential fromImageIntegral(double theta, double t);

}  // namespace sphere

}  // namespace heatlab
