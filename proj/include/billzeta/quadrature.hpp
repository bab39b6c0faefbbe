// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

namespace billzeta {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Composite Gauss-Legendre rule over [lo, hi]. Panel boundaries include every
/// entry of `breakpoints` lying inside (lo, hi); remaining panels are split
/// evenly so that the total node count is at least `min_nodes`.
QuadratureRule composite_gauss_legendre(double lo, double hi, int min_nodes,
                                        const std::vector<double>& breakpoints = {},
                                        int points_per_panel = 16);

double integrate(const std::function<double(double)>& f, const QuadratureRule& rule);

}  // namespace billzeta
