#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with global bisection. Internal to
// the library; the panel error estimate is |K15 - G7|.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "spectrace/errors.hpp"

namespace spectrace::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::int64_t evaluations = 0;
  std::int64_t panels = 0;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
};

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

// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Panel gauss_kronrod_panel(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(fc) * kKronrodWeights[7];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[i] * (f1 + f2);
    abs_sum += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.abs_value = abs_sum * std::abs(half);
  p.error = std::abs((kronrod - gauss) * half) +
            64.0 * std::numeric_limits<double>::epsilon() * p.abs_value;
  return p;
}

/// Integrates f over [a, b], bisecting the panel with the largest error until
/// the summed error estimate is at most budget. Throws ConvergenceError when
/// max_panels is exhausted first.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double budget,
                                    std::int64_t max_panels = 4000) {
  auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);

  QuadratureResult out;
  Panel first = gauss_kronrod_panel(f, a, b);
  out.evaluations += 15;
  double total_error = first.error;
  queue.push(first);

  while (total_error > budget) {
    if (static_cast<std::int64_t>(queue.size()) >= max_panels) {
      throw ConvergenceError("adaptive quadrature exhausted its panel budget");
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ConvergenceError("adaptive quadrature panel collapsed below machine resolution");
    }
    Panel left = gauss_kronrod_panel(f, worst.a, mid);
    Panel right = gauss_kronrod_panel(f, mid, worst.b);
    out.evaluations += 30;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Re-sum in a deterministic order so the result does not depend on
  // the error-estimate bookkeeping above.
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double value = 0.0;
  double error = 0.0;
  for (const auto& p : panels) {
    value += p.value;
    error += p.error;
  }
  out.value = value;
  out.error = error;
  out.panels = static_cast<std::int64_t>(panels.size());
  return out;
}

}  // namespace spectrace::detail
