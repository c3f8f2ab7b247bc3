#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature over vector-valued
// integrands. Every component shares the panel subdivision, so a kernel value
// and its derivatives can be integrated in one sweep.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace heatlab::detail {

// Kronrod abscissae on [-1, 1], descending; odd indices are the Gauss nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Panel {
  double a = 0;
  double b = 0;
  Vec<N> value{};
  Vec<N> error{};
  double priority = 0;
  bool operator<(const Panel& other) const { return priority < other.priority; }
};

template <std::size_t N>
struct VectorQuadrature {
  Vec<N> value{};
  Vec<N> error{};
  std::size_t evaluations = 0;
  bool converged = false;
};

template <std::size_t N, class F>
Panel<N> kronrodPanel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Panel<N> p;
  p.a = a;
  p.b = b;
  Vec<N> kronrod{};
  Vec<N> gauss{};
  const Vec<N> fc = f(center);
  for (std::size_t i = 0; i < N; ++i) {
    kronrod[i] = kKronrodWeights[7] * fc[i];
    gauss[i] = kGaussWeights[3] * fc[i];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const Vec<N> lo = f(center - dx);
    const Vec<N> hi = f(center + dx);
    for (std::size_t i = 0; i < N; ++i) {
      const double pair = lo[i] + hi[i];
      kronrod[i] += kKronrodWeights[j] * pair;
      if (j % 2 == 1) gauss[i] += kGaussWeights[j / 2] * pair;
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    p.value[i] = kronrod[i] * half;
    p.error[i] = std::abs((kronrod[i] - gauss[i]) * half);
  }
  return p;
}

/// Integrates f over [a, b]. Component i is converged when its summed panel
/// error is at most max(absTol[i], relTol * |value[i]|).
template <std::size_t N, class F>
VectorQuadrature<N> gaussKronrodAdaptive(F&& f, double a, double b, const Vec<N>& absTol,
                                         double relTol, std::size_t maxPanels,
                                         double initialWidth = 0.0) {
  VectorQuadrature<N> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::size_t initial = 1;
  if (initialWidth > 0.0) {
    initial = static_cast<std::size_t>(std::ceil((b - a) / initialWidth));
    initial = std::clamp<std::size_t>(initial, 1, std::max<std::size_t>(1, maxPanels / 4));
  }

  Vec<N> total{};
  Vec<N> totalError{};
  auto allowed = [&](std::size_t i) {
    return std::max({absTol[i], relTol * std::abs(total[i]), std::numeric_limits<double>::min()});
  };
  auto setPriority = [&](Panel<N>& p) {
    double key = 0.0;
    for (std::size_t i = 0; i < N; ++i) key = std::max(key, p.error[i] / allowed(i));
    p.priority = key;
  };
  auto converged = [&] {
    for (std::size_t i = 0; i < N; ++i)
      if (totalError[i] > allowed(i)) return false;
    return true;
  };

  std::vector<Panel<N>> panels;
  panels.reserve(initial);
  const double width = (b - a) / static_cast<double>(initial);
  for (std::size_t k = 0; k < initial; ++k) {
    const double lo = a + width * static_cast<double>(k);
    const double hi = (k + 1 == initial) ? b : a + width * static_cast<double>(k + 1);
    panels.push_back(kronrodPanel<N>(f, lo, hi));
    out.evaluations += 15;
    for (std::size_t i = 0; i < N; ++i) {
      total[i] += panels.back().value[i];
      totalError[i] += panels.back().error[i];
    }
  }
  for (auto& p : panels) setPriority(p);
  std::priority_queue<Panel<N>> heap(std::less<Panel<N>>{}, std::move(panels));
  std::vector<Panel<N>> frozen;  // panels too narrow to split further

  while (!converged() && heap.size() + frozen.size() < maxPanels && !heap.empty()) {
    Panel<N> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    Panel<N> left = kronrodPanel<N>(f, worst.a, mid);
    Panel<N> right = kronrodPanel<N>(f, mid, worst.b);
    out.evaluations += 30;
    for (std::size_t i = 0; i < N; ++i) {
      total[i] += left.value[i] + right.value[i] - worst.value[i];
      totalError[i] += left.error[i] + right.error[i] - worst.error[i];
    }
    setPriority(left);
    setPriority(right);
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the final panel set so the result carries no update drift,
  // smallest contributions first.
  std::vector<Panel<N>> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel<N>& x, const Panel<N>& y) { return x.a < y.a; });
  total = {};
  totalError = {};
  for (const auto& p : all) {
    for (std::size_t i = 0; i < N; ++i) {
      total[i] += p.value[i];
      totalError[i] += p.error[i];
    }
  }
  out.value = total;
  out.error = totalError;
  out.converged = converged();
  return out;
}

}  // namespace heatlab::detail
