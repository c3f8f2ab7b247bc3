#include "heatlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "heatlab/errors.hpp"

namespace heatlab {

namespace {

double lambdaSum(const MomentSpec& spec) {
  return std::accumulate(spec.lambdas.begin(), spec.lambdas.end(), 0.0);
}

// (p-1)!! (2t)^{p/2} for even p.
double gaussianMoment(int p, double t) {
  if (p % 2 != 0) return 0.0;
  double m = 1.0;
  for (int k = p - 1; k > 0; k -= 2) m *= k * 2.0 * t;
  return m;
}

// The Wick sums weight terms by lambdas of either sign; accumulating in long
// double keeps the recursion residuals at the rounding level of the result.
long double inWickSum(const MomentSpec& spec) {
  std::vector<int> powers(spec.n, 0);
  long double total = 0.0L;
  for (int k = 0; k < spec.n; ++k) {
    long double inner = 0.0L;
    for (int j = 0; j < spec.n; ++j) {
      powers[k] += 2;
      powers[j] += 2;
      inner += wickOracle(powers, spec.n, spec.t);
      powers[k] -= 2;
      powers[j] -= 2;
    }
    total += spec.lambdas[k] * inner;
  }
  return total;
}

long double qnWickSum(const MomentSpec& spec) {
  std::vector<int> powers(spec.n, 0);
  long double total = 0.0L;
  for (int k = 0; k < spec.n; ++k) {
    long double inner = 0.0L;
    for (int j = 0; j < spec.n; ++j) {
      for (int l = 0; l < spec.n; ++l) {
        powers[k] += 2;
        powers[j] += 2;
        powers[l] += 2;
        inner += wickOracle(powers, spec.n, spec.t);
        powers[k] -= 2;
        powers[j] -= 2;
        powers[l] -= 2;
      }
    }
    total += spec.lambdas[k] * inner;
  }
  return total;
}

}  // namespace

void validate(const MomentSpec& spec) {
  if (spec.n < 1) throw ArgumentError("MomentSpec: n must be at least 1");
  if (spec.lambdas.size() != static_cast<std::size_t>(spec.n))
    throw ArgumentError("MomentSpec: expected " + std::to_string(spec.n) + " lambdas, got " +
                        std::to_string(spec.lambdas.size()));
  if (!(spec.t > 0.0)) throw ArgumentError("MomentSpec: t must be positive");
}

double momentIn(const MomentSpec& spec) {
  validate(spec);
  return 4.0 * (spec.n + 2) * lambdaSum(spec) * spec.t * spec.t;
}

double momentQn(const MomentSpec& spec) {
  validate(spec);
  const double n = spec.n;
  return 8.0 * (n * n + 6.0 * n + 8.0) * lambdaSum(spec) * spec.t * spec.t * spec.t;
}

double wickOracle(std::span<const int> powers, int n, double t) {
  if (powers.size() != static_cast<std::size_t>(n))
    throw ArgumentError("wickOracle: multi-index length differs from n");
  if (!(t > 0.0)) throw ArgumentError("wickOracle: t must be positive");
  double value = 1.0;
  for (int p : powers) {
    if (p < 0) throw ArgumentError("wickOracle: negative exponent");
    value *= gaussianMoment(p, t);
  }
  return value;
}

double momentInWick(const MomentSpec& spec) {
  validate(spec);
  return static_cast<double>(inWickSum(spec));
}

double momentQnWick(const MomentSpec& spec) {
  validate(spec);
  return static_cast<double>(qnWickSum(spec));
}

std::pair<double, double> inductionStep(const MomentSpec& current, const MomentSpec& previous) {
  validate(current);
  validate(previous);
  if (previous.n != current.n - 1 || previous.t != current.t ||
      !std::equal(previous.lambdas.begin(), previous.lambdas.end(), current.lambdas.begin()))
    throw ArgumentError("inductionStep: previous spec must drop exactly the last coordinate of current");
  const long double n = current.n;
  const long double t = current.t;
  long double sumAll = 0.0L;
  for (double l : current.lambdas) sumAll += l;
  const long double lastLambda = current.lambdas.back();
  const long double iResidual =
      inWickSum(current) - (inWickSum(previous) + 4.0L * sumAll * t * t + 4.0L * (n + 1.0L) * lastLambda * t * t);
  const long double qResidual =
      qnWickSum(current) - (qnWickSum(previous) + 8.0L * (2.0L * n + 5.0L) * sumAll * t * t * t +
                            8.0L * (n * n + 4.0L * n + 3.0L) * lastLambda * t * t * t);
  return {static_cast<double>(iResidual), static_cast<double>(qResidual)};
}

}  // namespace heatlab
