// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <limits>

namespace billzeta {

GeneralizedProblem assemble(const ModeBasis& basis, const SigmaPowerTable& table, double lambda) {
  if (table.size() != basis.size()) throw ValidationError("sigma table does not match the basis size");
  if (table.max_power() < 1) throw ValidationError("assembly needs <n|sigma|m>");
  if (const auto sup = table.profile_sup()) check_density_bound(lambda, *sup);
  GeneralizedProblem p;
  p.stiffness = basis.eigenvalues();
  const MatrixXd& s1 = table.power(1);
  p.mass = MatrixXd::Identity(s1.rows(), s1.cols()) + lambda * s1;
  // exact symmetry regardless of how the table was produced
  for (Eigen::Index r = 0; r < p.mass.rows(); ++r)
    for (Eigen::Index c = r + 1; c < p.mass.cols(); ++c) p.mass(c, r) = p.mass(r, c);
  return p;
}

Spectrum solve_spectrum(const GeneralizedProblem& problem) {
  const Eigen::Index size = problem.stiffness.size();
  if (problem.mass.rows() != size || problem.mass.cols() != size)
    throw ValidationError("stiffness and mass sizes differ");
  if ((problem.stiffness.array() <= 0.0).any()) throw ValidationError("stiffness must be positive");

  const Eigen::LLT<MatrixXd> llt(problem.mass);
  if (llt.info() != Eigen::Success)
    throw FactorizationError(
        "mass matrix I + lambda<sigma> is not positive definite; the density bound sup|lambda sigma| < 1 is violated");

  // C = L^{-1} K L^{-T}
  const auto& l = llt.matrixL();
  MatrixXd c = l.solve(MatrixXd(problem.stiffness.asDiagonal()));
  c = l.solve(MatrixXd(c.transpose()));
  c = 0.5 * (c + c.transpose()).eval();

  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(c);
  if (eig.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");

  Spectrum out;
  out.eigenvalues = eig.eigenvalues();
  out.vectors = llt.matrixU().solve(eig.eigenvectors());
  if ((out.eigenvalues.array() <= 0.0).any()) throw NumericalError("nonpositive eigenvalue in a Dirichlet spectrum");
  return out;
}

double max_relative_residual(const GeneralizedProblem& problem, const Spectrum& spectrum) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const VectorXd c = spectrum.vectors.col(i);
    const VectorXd kc = problem.stiffness.cwiseProduct(c);
    const VectorXd r = kc - spectrum.eigenvalues(i) * (problem.mass * c);
    worst = std::max(worst, r.norm() / kc.norm());
  }
  return worst;
}

double z_direct(const VectorXd& eigenvalues, double s, const ModeBasis& basis, double weyl_scale, double discard) {
  require_convergent(s, basis);
  if (!(discard >= 0.0 && discard < 1.0)) throw ValidationError("top discard fraction must lie in [0, 1)");
  if (!(weyl_scale > 0.0)) throw ValidationError("weyl scale must be positive");
  const auto size = static_cast<int>(eigenvalues.size());
  const int inner = size - static_cast<int>(std::floor(discard * size));
  if (inner < 1) throw ValidationError("no eigenvalues left after the top discard");
  std::vector<double> terms(inner);
  for (int n = 0; n < inner; ++n) terms[n] = std::pow(eigenvalues(n), -s);
  return pairwise_sum(terms) + std::pow(weyl_scale, s) * tail_estimate(basis, s, inner);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ValidationError("slope fit needs distinct abscissae");
  return sxy / sxx;
}

ConvergenceReport convergence_order_fit(double s, const ModeBasis& basis, const DensityProfile& profile,
                                        const std::vector<double>& lambdas, const ConvergenceSettings& settings) {
  const ModeBasis b = basis.size() == settings.modes ? basis : basis.truncated(settings.modes);
  return convergence_order_fit(s, b, profile, build_sigma_table(b, profile, 2, settings.quadrature), lambdas,
                               settings);
}

ConvergenceReport convergence_order_fit(double s, const ModeBasis& basis, const DensityProfile& profile,
                                        const SigmaPowerTable& table, const std::vector<double>& lambdas,
                                        const ConvergenceSettings& settings) {
  require_convergent(s, basis);
  if (lambdas.size() < 3) throw ValidationError("convergence fit needs at least 3 lambda values");
  const double sup = table.profile_sup().value_or(profile_sup(basis, profile));
  for (double l : lambdas) {
    if (!(l > 0.0)) throw ValidationError("convergence fit needs positive lambda values");
    check_density_bound(l, sup);
  }

  ConvergenceReport report;
  report.s = s;
  report.first_order_only = settings.first_order_only;

  // lambda = 0 mismatch: what the truncation and tail leave behind
  const auto direct_at = [&](double lambda) {
    const auto spectrum = solve_spectrum(assemble(basis, table, lambda));
    return z_direct(spectrum.eigenvalues, s, basis, weyl_scale(basis, profile, lambda), settings.discard);
  };
  const auto pert_at = [&](double lambda) {
    const auto r = z_closed_form(s, table, basis, lambda);
    return settings.first_order_only ? r.z0 + r.z1 : r.z_total;
  };
  const double z_hom = pert_at(0.0);
  report.floor = std::abs(z_hom - direct_at(0.0)) + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(z_hom);

  std::vector<double> lx, ly;
  for (double l : lambdas) {
    FitPoint p;
    p.lambda = l;
    p.z_pert = pert_at(l);
    p.z_direct = direct_at(l);
    p.error = std::abs(p.z_pert - p.z_direct);
    p.used = p.error >= 10.0 * report.floor;
    if (p.used) {
      lx.push_back(std::log(l));
      ly.push_back(std::log(p.error));
    } else {
      char buf[160];
      std::snprintf(buf, sizeof buf, "lambda=%.17g error %.3e below 10x floor %.3e", l, p.error, report.floor);
      report.excluded.emplace_back(buf);
    }
    report.points.push_back(p);
  }
  if (lx.size() < 3)
    throw NumericalError("convergence fit has " + std::to_string(lx.size()) +
                         " usable points above the truncation floor; need 3");
  report.slope = least_squares_slope(lx, ly);
  return report;
}

}  // namespace billzeta
