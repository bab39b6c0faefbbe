// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/// Brute-force reference spectrum. The heterogeneous problem -lap psi = E Sigma psi
/// projected onto the homogeneous modes is K c = E S c with K = diag(eps) and
/// S = I + lambda <n|sigma|m>. Reduced with S = L L^T and solved densely.

#pragma once

#include "billzeta/basis.hpp"
#include "billzeta/core.hpp"
#include "billzeta/sum_rules.hpp"

#include <functional>
#include <string>
#include <vector>

namespace billzeta {

struct GeneralizedProblem {
  VectorXd stiffness;  ///< diagonal of K
  MatrixXd mass;       ///< S, symmetric positive definite
};

GeneralizedProblem assemble(const ModeBasis& basis, const SigmaPowerTable& table, double lambda);

struct Spectrum {
  VectorXd eigenvalues;  ///< ascending
  MatrixXd vectors;      ///< columns c with c^T S c = 1
};

/// Throws FactorizationError when S is not positive definite, which means the
/// density bound sup |lambda sigma| < 1 was violated.
Spectrum solve_spectrum(const GeneralizedProblem& problem);

/// max over pairs of ||K c - E S c|| / ||K c||.
double max_relative_residual(const GeneralizedProblem& problem, const Spectrum& spectrum);

/// Sum of E_n^{-s} over the lowest M - floor(discard M) eigenvalues plus the
/// homogeneous tail at that count, rescaled by weyl_scale^s (eigenvalues of the
/// dressed problem sit near eps / weyl_scale asymptotically).
double z_direct(const VectorXd& eigenvalues, double s, const ModeBasis& basis, double weyl_scale,
                double discard = 0.25);

struct FitPoint {
  double lambda = 0.0;
  double z_pert = 0.0;
  double z_direct = 0.0;
  double error = 0.0;
  bool used = false;
};

struct ConvergenceReport {
  double s = 0.0;
  double slope = 0.0;
  double floor = 0.0;
  bool first_order_only = false;
  std::vector<FitPoint> points;
  std::vector<std::string> excluded;
};

struct ConvergenceSettings {
  int modes = 400;
  double discard = 0.25;
  bool first_order_only = false;
  QuadratureSettings quadrature{};
};

/// Least-squares slope of log |Z_pert - Z_direct| against log lambda.
/// Z_pert uses the truncated-diagonal closed form; the homogeneous mismatch
/// at lambda = 0 is the floor and points within 10x of it are dropped.
ConvergenceReport convergence_order_fit(double s, const ModeBasis& basis, const DensityProfile& profile,
                                        const std::vector<double>& lambdas, const ConvergenceSettings& settings);

/// Same, reusing a prebuilt table (J >= 2) for the basis.
ConvergenceReport convergence_order_fit(double s, const ModeBasis& basis, const DensityProfile& profile,
                                        const SigmaPowerTable& table, const std::vector<double>& lambdas,
                                        const ConvergenceSettings& settings);

/// Plain least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace billzeta
