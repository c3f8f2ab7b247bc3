#include "heatlab/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "heatlab/detail/gauss_kronrod.hpp"
#include "heatlab/errors.hpp"

namespace heatlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Sphere2 switches from the eigenseries to the image integral when
// theta^2 / (4t) exceeds this; the series loses relative accuracy past it.
constexpr double kSeriesGaussianLimit = 1.0;

// Within this distance e of the S^2 antipode cot(theta) f_theta loses all
// digits; there Delta f = (4/3) f''(theta) + (2/3) f''(pi) + O(e^4).
constexpr double kAntipodeBand = 1e-7;

void checkArguments(const ModelSpace& m, double d, double t, const char* op) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw DomainError(std::string(op) + ": t must be positive, got " + std::to_string(t));
  if (!(d >= 0.0) || d > m.injectivityRadius() || !std::isfinite(d))
    throw DomainError(std::string(op) + ": distance " + std::to_string(d) + " outside the domain of " +
                      m.name());
}

// Langevin function coth(s) - 1/s and its derivative 1/s^2 - 1/sinh^2(s).
double langevin(double s) {
  if (s < 0.1) {
    const double s2 = s * s;
    return s * (1.0 / 3.0 + s2 * (-1.0 / 45.0 + s2 * (2.0 / 945.0 + s2 * (-1.0 / 4725.0 + s2 * 2.0 / 93555.0))));
  }
  return 1.0 / std::tanh(s) - 1.0 / s;
}

double langevinPrime(double s) {
  if (s < 0.1) {
    const double s2 = s * s;
    return 1.0 / 3.0 +
           s2 * (-1.0 / 15.0 + s2 * (2.0 / 189.0 + s2 * (-7.0 / 4725.0 + s2 * 18.0 / 93555.0)));
  }
  if (s > 350.0) return 1.0 / (s * s);
  const double sh = std::sinh(s);
  return 1.0 / (s * s) - 1.0 / (sh * sh);
}

// ln(sinh(s) / s) >= 0.
double logSinhc(double s) {
  if (s < 0.1) {
    const double s2 = s * s;
    return s2 * (1.0 / 6.0 + s2 * (-1.0 / 180.0 + s2 * (1.0 / 2835.0 - s2 / 37800.0)));
  }
  if (s > 20.0) return s - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * s)) - std::log(s);
  return std::log(std::sinh(s) / s);
}

ExcessPotential hyperbolicPotential(double kappa, double d, double t) {
  const double c = std::sqrt(kappa);
  const double s = c * d;
  return {kappa * t + logSinhc(s), c * langevin(s), kappa * langevinPrime(s), kappa};
}

ExcessPotential circlePotential(double d, double t) {
  // Images d + 2 pi k relative to k = 0; every exponent is <= 0 on [0, pi].
  double z = 1.0, zd = 0.0, zdd = 0.0, zt = 0.0;
  for (int k = 1;; ++k) {
    bool negligible = true;
    for (int sign : {1, -1}) {
      const double kk = sign * k;
      const double expo = -kPi * kk * (d + kPi * kk) / t;
      if (expo < -745.0) continue;
      const double r = std::exp(expo);
      if (r > 1e-18) negligible = false;
      const double g = -kPi * kk / t;
      z += r;
      zd += r * g;
      zdd += r * g * g;
      zt += r * (-expo / t);
    }
    if (negligible) break;
  }
  const double rd = zd / z;
  return {-std::log(z), -rd, -zdd / z + rd * rd, -zt / z};
}

// ln(sin(x)/x) derivatives, series near 0.
double logSincPrime(double x) {
  if (std::abs(x) < 0.05) {
    const double x2 = x * x;
    return -x * (1.0 / 3.0 + x2 * (1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 / 4725.0)));
  }
  return 1.0 / std::tan(x) - 1.0 / x;
}

double logSincSecond(double x) {
  if (std::abs(x) < 0.05) {
    const double x2 = x * x;
    return -(1.0 / 3.0 + x2 * (1.0 / 15.0 + x2 * (2.0 / 189.0 + x2 / 675.0)));
  }
  const double s = std::sin(x);
  return 1.0 / (x * x) - 1.0 / (s * s);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

struct LegendreSums {
  double h = 0.0;    // sum c_l P_l
  double p1 = 0.0;   // sum c_l P_l'
  double p2 = 0.0;   // sum c_l P_l''
  double ht = 0.0;   // sum -l(l+1) c_l P_l
};

// Accumulated in long double: w_t = -H_t/H - 1/t + theta^2/4t^2 cancels
// O(1/t) terms, so double sums lose ~1e-9 absolute at t = 1e-4.
LegendreSums legendreSums(double theta, double t, double tol) {
  using Wide = long double;
  const int lmax = sphere::seriesCutoff(t, tol);
  const Wide x = std::cos(static_cast<Wide>(theta));
  const Wide tw = t;
  const Wide fourPi = 4.0L * std::numbers::pi_v<Wide>;
  Wide pPrev = 1.0L, p = x;
  Wide dPrev = 0.0L, dp = 1.0L;
  Wide ddPrev = 0.0L, ddp = 0.0L;
  Wide h = 1.0L / fourPi, p1 = 0.0L, p2 = 0.0L, ht = 0.0L;
  for (int l = 1; l <= lmax; ++l) {
    const Wide ll = l;
    const Wide c = (2.0L * ll + 1.0L) / fourPi * std::exp(-ll * (ll + 1.0L) * tw);
    h += c * p;
    p1 += c * dp;
    p2 += c * ddp;
    ht -= ll * (ll + 1.0L) * c * p;
    const Wide pNext = ((2.0L * ll + 1.0L) * x * p - ll * pPrev) / (ll + 1.0L);
    const Wide dNext = ((2.0L * ll + 1.0L) * (p + x * dp) - ll * dPrev) / (ll + 1.0L);
    const Wide ddNext = ((2.0L * ll + 1.0L) * (2.0L * dp + x * ddp) - ll * ddPrev) / (ll + 1.0L);
    pPrev = p;
    p = pNext;
    dPrev = dp;
    dp = dNext;
    ddPrev = ddp;
    ddp = ddNext;
  }
  return {static_cast<double>(h), static_cast<double>(p1), static_cast<double>(p2), static_cast<double>(ht)};
}

using Vec4 = detail::Vec<4>;

// Integrand of the scaled kernel S(theta, t) = H e^{theta^2/4t} / C(t) in the
// variable u, phi = theta + (pi - theta) u^2, and its theta, theta-theta and t
// derivatives. Smooth on (0, pi] x [0, 1], including the antipode.
Vec4 imageIntegrand(double theta, double t, double u) {
  const double L = kPi - theta;
  const double u2 = u * u;
  const double phi = theta + L * u2;
  const double p = 1.0 - u2;  // d phi / d theta
  const double c = 1.0 - 0.5 * u2;
  const double alpha = L * c;
  const double beta = 0.5 * L * u2;

  const double q = 1.0 / std::sqrt(c * sinc(alpha) * sinc(beta));
  const double lq1 = 0.5 * (c * logSincPrime(alpha) + 0.5 * u2 * logSincPrime(beta));
  const double lq2 = -0.5 * (c * c * logSincSecond(alpha) + 0.25 * u2 * u2 * logSincSecond(beta));
  const double q1 = q * lq1;
  const double q2 = q * (lq2 + lq1 * lq1);

  double g = 0.0, g1 = 0.0, g2 = 0.0, gt = 0.0;
  const double e2 = (1.0 - p * p) / (2.0 * t);
  for (int k = -3; k <= 3; ++k) {
    const double psi = phi + 2.0 * kPi * k;
    const double gap = (psi - theta) * (psi + theta);
    const double expo = -gap / (4.0 * t);
    if (expo < -740.0) continue;
    const double term = ((k % 2 == 0) ? 1.0 : -1.0) * std::exp(expo);
    const double e1 = -(psi * p - theta) / (2.0 * t);
    g += term * psi;
    g1 += term * (p + psi * e1);
    g2 += term * (2.0 * p * e1 + psi * (e1 * e1 + e2));
    gt += term * psi * gap / (4.0 * t * t);
  }
  return {2.0 * g * q, 2.0 * (g1 * q + g * q1), 2.0 * (g2 * q + 2.0 * g1 * q1 + g * q2), 2.0 * gt * q};
}

ExcessPotential spherePotential(double theta, double t) {
  if (theta * theta / (4.0 * t) <= kSeriesGaussianLimit) return sphere::fromSeries(theta, t);
  return sphere::fromImageIntegral(theta, t);
}

}  // namespace

namespace sphere {

int seriesCutoff(double t, double tol) {
  const double logTol = std::max(1.0, -std::log(tol));
  return static_cast<int>(std::ceil(std::sqrt(logTol / t))) + 10;
}

double seriesKernel(double theta, double t, double tol) {
  if (!(t > 0.0)) throw DomainError("sphere::seriesKernel: t must be positive");
  return legendreSums(theta, t, tol).h;
}

ExcessPotential fromSeries(double theta, double t, double tol) {
  const LegendreSums s = legendreSums(theta, t, tol);
  if (!(s.h > 0.0))
    throw NumericError("sphere::fromSeries: eigenseries lost positivity at theta=" +
                       std::to_string(theta) + ", t=" + std::to_string(t));
  const double sn = std::sin(theta);
  const double cs = std::cos(theta);
  const double hTheta = -sn * s.p1;
  const double hThetaTheta = sn * sn * s.p2 - cs * s.p1;
  const double r1 = hTheta / s.h;
  ExcessPotential out;
  out.w = -std::log(4.0 * kPi * t * s.h) - theta * theta / (4.0 * t);
  out.dw_dd = -r1 - theta / (2.0 * t);
  out.d2w_dd2 = -hThetaTheta / s.h + r1 * r1 - 1.0 / (2.0 * t);
  out.dw_dt = -s.ht / s.h - 1.0 / t + theta * theta / (4.0 * t * t);
  return out;
}

ExcessPotential fromImageIntegral(double theta, double t) {
  if (!(theta > 0.0)) throw DomainError("sphere::fromImageIntegral: theta must be positive");
  auto integrand = [&](double u) { return imageIntegrand(theta, t, u); };
  // Length scale of the Gaussian factor in u.
  const double width = std::sqrt(2.0 * t / std::max((kPi - theta) * theta, 1e-300));
  const double initial = std::min(1.0, 2.0 * width);

  auto scalar = [&](double u) { return detail::Vec<1>{imageIntegrand(theta, t, u)[0]}; };
  const auto rough = detail::gaussKronrodAdaptive<1>(scalar, 0.0, 1.0, {0.0}, 1e-8, 2000, initial);
  const double scale = std::abs(rough.value[0]);
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw NumericError("sphere::fromImageIntegral: degenerate kernel integral at theta=" +
                       std::to_string(theta));

  const double rate = std::max(1.0, theta / (2.0 * t));
  // The theta and t components cancel down from O(rate) integrands; their
  // roundoff floor sits near 1e-13 relative.
  const Vec4 absTol = {1e-15 * scale, 1e-13 * scale * rate, 1e-13 * scale * rate * rate,
                       1e-13 * scale * rate * rate};
  const auto res = detail::gaussKronrodAdaptive<4>(integrand, 0.0, 1.0, absTol, 1e-12, 4000, initial);
  if (!res.converged)
    throw QuadratureError("sphere::fromImageIntegral: no convergence at theta=" + std::to_string(theta) +
                              ", t=" + std::to_string(t),
                          res.value[0], res.error[0]);
  const double S = res.value[0];
  const double r1 = res.value[1] / S;
  ExcessPotential out;
  out.w = 0.5 * std::log(4.0 * kPi * t) - 0.5 * std::numbers::ln2 - 0.25 * t - std::log(S);
  out.dw_dd = -r1;
  out.d2w_dd2 = -res.value[2] / S + r1 * r1;
  out.dw_dt = 0.5 / t - 0.25 - res.value[3] / S;
  return out;
}

}  // namespace sphere

ExcessPotential excessPotential(const ModelSpace& m, double d, double t) {
  checkArguments(m, d, t, "excessPotential");
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return {};
    case ModelKind::HyperbolicH3:
      return hyperbolicPotential(m.curvatureScale(), d, t);
    case ModelKind::Sphere2:
      return spherePotential(d, t);
    case ModelKind::Circle:
      return circlePotential(d, t);
  }
  throw CapabilityError("excessPotential: unknown model");
}

KernelSample evalKernel(const ModelSpace& m, double d, double t) {
  const ExcessPotential ep = excessPotential(m, d, t);
  const int n = m.dimension();
  KernelSample s;
  s.d = d;
  s.t = t;
  s.f = d * d / (4.0 * t) + ep.w;
  s.logH = -0.5 * n * std::log(4.0 * kPi * t) - s.f;
  s.H = std::exp(s.logH);
  s.df_dd = d / (2.0 * t) + ep.dw_dd;
  s.d2f_dd2 = 1.0 / (2.0 * t) + ep.d2w_dd2;
  s.df_dt = -d * d / (4.0 * t * t) + ep.dw_dt;
  // Delta = d^2/dd^2 + (A'/A) d/dd; at the base point and at the antipode of
  // S^2 it is n d^2/dd^2.
  if (m.kind() == ModelKind::Sphere2 && kPi - d < kAntipodeBand) {
    const double atAntipode = d == kPi ? s.d2f_dd2 : 1.0 / (2.0 * t) + excessPotential(m, kPi, t).d2w_dd2;
    s.laplacianF = (4.0 * s.d2f_dd2 + 2.0 * atAntipode) / 3.0;
  } else {
    const double radial = radialAreaLogDerivative(m, d);  // d A'/A
    const double laplacianW = (d > 0.0) ? ep.d2w_dd2 + areaLogDerivative(m, d) * ep.dw_dd : n * ep.d2w_dd2;
    s.laplacianF = (1.0 + radial) / (2.0 * t) + laplacianW;
  }
  s.dH_dt = s.H * (-0.5 * n / t - s.df_dt);
  s.dH_dd = -s.H * s.df_dd;
  s.d2H_dd2 = s.H * (s.df_dd * s.df_dd - s.d2f_dd2);
  s.laplacianH = s.H * (s.df_dd * s.df_dd - s.laplacianF);
  return s;
}

double logKernelScaled(const ModelSpace& m, double d, double t) {
  const ExcessPotential ep = excessPotential(m, d, t);
  const int n = m.dimension();
  return t * (-0.5 * n * std::log(4.0 * kPi * t) - d * d / (4.0 * t) - ep.w);
}

double kernelTruncationRadius(const ModelSpace& m, double t, double tol) {
  if (!(t > 0.0)) throw DomainError("kernelTruncationRadius: t must be positive");
  if (!(tol > 0.0)) throw ArgumentError("kernelTruncationRadius: tol must be positive");
  const int n = m.dimension();
  const double growth = m.kind() == ModelKind::HyperbolicH3 ? 2.0 * std::sqrt(m.curvatureScale()) : 0.0;
  const double margin = m.compact() ? 1e3 : 1.0;
  const double target = std::log(tol * 1e-3);
  auto logBound = [&](double rho) {
    const double poly = 1.0 + rho * rho / t;
    return std::log(40.0 * margin * (1.0 + 1.0 / t)) - 0.5 * n * std::log(4.0 * kPi * t) -
           rho * rho / (4.0 * t) + growth * rho + (n + 1) * std::log1p(rho) + 3.0 * std::log(poly);
  };
  const double inj = m.injectivityRadius();
  double rho = std::sqrt(t);
  while (logBound(rho) >= target) {
    rho *= 1.1;
    if (rho >= inj) return inj;
  }
  return std::min(rho, inj);
}

QuadratureResult integrateAgainstKernel(const ModelSpace& m, double t,
                                        const std::function<double(const KernelSample&)>& multiplier,
                                        double lower, double upper, double tol, double relTol) {
  const double hi = std::min(upper, kernelTruncationRadius(m, t, std::max(tol, 1e-300)));
  if (!(hi > lower)) return {};
  auto integrand = [&](double rho) {
    const KernelSample s = evalKernel(m, rho, t);
    const double weight = std::exp(s.logH + logAreaDensity(m, rho));
    return weight == 0.0 ? 0.0 : multiplier(s) * weight;
  };
  QuadratureOptions opts;
  opts.relTol = relTol;
  opts.initialPanelWidth = std::sqrt(t);
  return integrateRadial(integrand, lower, hi, tol, opts);
}

double totalMass(const ModelSpace& m, double t, double tol) {
  return integrateAgainstKernel(m, t, [](const KernelSample&) { return 1.0; }, 0.0,
                                m.injectivityRadius(), tol)
      .value;
}

}  // namespace heatlab
