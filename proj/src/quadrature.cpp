// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace billzeta {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  if (n == 1) return {{0.0}, {2.0}};
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule composite_gauss_legendre(double lo, double hi, int min_nodes,
                                        const std::vector<double>& breakpoints,
                                        int points_per_panel) {
  if (!(hi > lo)) throw std::invalid_argument("composite_gauss_legendre: empty interval");
  std::vector<double> edges{lo};
  for (double b : breakpoints)
    if (b > lo && b < hi) edges.push_back(b);
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const int coarse_panels = static_cast<int>(edges.size()) - 1;
  const int wanted_panels = std::max(coarse_panels, (min_nodes + points_per_panel - 1) / points_per_panel);
  const double width = hi - lo;

  const QuadratureRule base = gauss_legendre(points_per_panel);
  QuadratureRule rule;
  for (int p = 0; p < coarse_panels; ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    const int sub = std::max(1, static_cast<int>(std::ceil(wanted_panels * (b - a) / width)));
    const double h = (b - a) / sub;
    for (int s = 0; s < sub; ++s) {
      const double mid = a + (s + 0.5) * h;
      for (int i = 0; i < points_per_panel; ++i) {
        rule.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
        rule.weights.push_back(0.5 * h * base.weights[i]);
      }
    }
  }
  return rule;
}

double integrate(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

}  // namespace billzeta
