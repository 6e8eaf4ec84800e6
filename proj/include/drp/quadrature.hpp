#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace drp {

/// Gauss–Legendre rule of fixed order on [-1, 1]. Nodes are the roots of
/// P_n, found by Newton iteration from the Chebyshev-like initial guess.
template <int Order>
struct GaussLegendre {
  static_assert(Order >= 1);
  std::array<double, Order> nodes{};
  std::array<double, Order> weights{};

  GaussLegendre() {
    for (int i = 0; i < (Order + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (Order + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= Order; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = Order * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) <= 1e-16) break;
      }
      // Recompute the derivative at the converged node for the weight.
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= Order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = Order * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[Order - 1 - i] = x;
      weights[i] = w;
      weights[Order - 1 - i] = w;
    }
    if constexpr (Order % 2 == 1) nodes[Order / 2] = 0.0;
  }

  /// Integral of f over [a, b].
  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < Order; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

template <int Order>
const GaussLegendre<Order>& gauss_legendre() {
  static const GaussLegendre<Order> rule;
  return rule;
}

}  // namespace drp
