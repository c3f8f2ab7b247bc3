#pragma once

#include <span>
#include <utility>
#include <vector>

namespace heatlab {

/// Diagonal quadratic form sum_k lambda_k x_k^2 against the centered Gaussian
/// of per-coordinate variance 2t.
struct MomentSpec {
  int n = 0;
  std::vector<double> lambdas;
  double t = 0.0;
};

/// Throws ArgumentError unless lambdas.size() == n >= 1 and t > 0.
void validate(const MomentSpec& spec);

/// E[(sum lambda_k x_k^2) |x|^2] = 4(n+2)(sum lambda) t^2.
double momentIn(const MomentSpec& spec);
/// E[(sum lambda_k x_k^2) |x|^4] = 8(n^2+6n+8)(sum lambda) t^3.
double momentQn(const MomentSpec& spec);

/// E[prod x_i^{p_i}] for the weight (4 pi t)^{-n/2} e^{-|x|^2/4t}; zero when
/// any exponent is odd. powers.size() must equal n.
double wickOracle(std::span<const int> powers, int n, double t);

/// The same expectations expanded monomial by monomial through wickOracle.
double momentInWick(const MomentSpec& spec);
double momentQnWick(const MomentSpec& spec);

/// Residuals of
///   I_n = I_{n-1} + 4(sum lambda) t^2 + 4(n+1) lambda_n t^2
///   Q_n = Q_{n-1} + 8(2n+5)(sum lambda) t^3 + 8(n^2+4n+3) lambda_n t^3
/// with I, Q assembled by Wick expansion and sum lambda over all n entries.
/// `previous` must be `current` with its last coordinate dropped.
std::pair<double, double> inductionStep(const MomentSpec& current, const MomentSpec& previous);

}  // namespace heatlab
