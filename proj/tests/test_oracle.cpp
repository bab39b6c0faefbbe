// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/oracle.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace billzeta;

namespace {

const DensityProfile kCos2{Profile1D{FourierCosine{{0.0, 0.0, 1.0}}}};
const DensityProfile kSinSquared{Profile1D{FourierCosine{{0.5, 0.0, -0.5}}}};
const DensityProfile kZero{Profile1D{FourierCosine{{0.0}}}};

Spectrum spectrum_of(const ModeBasis& basis, const DensityProfile& profile, double lambda) {
  return solve_spectrum(assemble(basis, build_sigma_table(basis, profile, 1), lambda));
}

}  // namespace

TEST_CASE("mass matrix of cos 2 pi x on four modes") {
  const auto basis = ModeBasis::string(1.0, 4);
  const auto p = assemble(basis, build_sigma_table(basis, kCos2, 1), 0.1);
  MatrixXd expected = MatrixXd::Identity(4, 4);
  expected(0, 0) = 0.95;
  expected(0, 2) = expected(2, 0) = 0.05;
  expected(1, 3) = expected(3, 1) = 0.05;
  CHECK((p.mass - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(p.mass == p.mass.transpose());
  CHECK(oracle::max_rel(p.stiffness, basis.eigenvalues()) == 0.0);
}

TEST_CASE("homogeneous spectrum is exact") {
  const auto basis = ModeBasis::string(1.0, 5);
  const auto sp = spectrum_of(basis, kZero, 0.0);
  for (int n = 0; n < 5; ++n)
    CHECK(sp.eigenvalues(n) == doctest::Approx((n + 1) * (n + 1) * oracle::kPi * oracle::kPi).epsilon(1e-12));
}

TEST_CASE("residuals and positivity") {
  for (const auto& basis : {ModeBasis::string(1.0, 150), ModeBasis::rectangle(1.0, 1.5, 150)}) {
    const DensityProfile profile =
        basis.dimension() == 1
            ? kCos2
            : DensityProfile{SeparableProfile{FourierCosine{{0.0, 0.0, 1.0}}, Polynomial{{0.0, 1.0}}, Combine::Sum}};
    const auto p = assemble(basis, build_sigma_table(basis, profile, 1), 0.3);
    const auto sp = solve_spectrum(p);
    CHECK(max_relative_residual(p, sp) <= 1e-10);
    CHECK(sp.eigenvalues.minCoeff() > 0.0);
    for (Eigen::Index i = 1; i < sp.eigenvalues.size(); ++i) CHECK(sp.eigenvalues(i) >= sp.eigenvalues(i - 1));
    // S-orthonormal eigenvectors
    const MatrixXd gram = sp.vectors.transpose() * p.mass * sp.vectors;
    CHECK((gram - MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("dense solve agrees with a Jacobi sweep") {
  const auto basis = ModeBasis::string(2.0, 24);
  const auto p = assemble(basis, build_sigma_table(basis, kCos2, 1), 0.4);
  const VectorXd reference = oracle::generalized_eigenvalues(p.stiffness, p.mass);
  CHECK(oracle::max_rel(solve_spectrum(p).eigenvalues, reference) < 1e-12);
}

TEST_CASE("Galerkin eigenvalues decrease as modes are added") {
  const auto s50 = spectrum_of(ModeBasis::string(1.0, 50), kSinSquared, 0.5).eigenvalues;
  const auto s100 = spectrum_of(ModeBasis::string(1.0, 100), kSinSquared, 0.5).eigenvalues;
  const auto s200 = spectrum_of(ModeBasis::string(1.0, 200), kSinSquared, 0.5).eigenvalues;
  // converged modes only move by the solver's backward error, eps * max eps_n
  const double noise = 64 * std::numeric_limits<double>::epsilon() * ModeBasis::string(1.0, 200).eigenvalues().maxCoeff();
  for (int n = 0; n < 50; ++n) {
    CHECK(s100(n) <= s50(n) + noise);
    CHECK(s200(n) <= s100(n) + noise);
  }
  CHECK(s100(49) < s50(49) * 0.95);
}

TEST_CASE("added mass lowers every eigenvalue") {
  const auto basis = ModeBasis::string(1.0, 60);
  const auto sp = spectrum_of(basis, kSinSquared, 0.3);
  for (int n = 0; n < 60; ++n) CHECK(sp.eigenvalues(n) < basis.eigenvalues()(n));
}

TEST_CASE("first-order eigenvalue shift") {
  const auto basis = ModeBasis::string(1.0, 40);
  std::vector<double> dev;
  for (double lam : {1e-3, 1e-4}) {
    const auto sp = spectrum_of(basis, kCos2, lam);
    const double shift = (sp.eigenvalues(0) - basis.eigenvalues()(0)) / basis.eigenvalues()(0);
    CHECK(shift == doctest::Approx(lam / 2).epsilon(0.01));
    dev.push_back(std::abs(shift - lam / 2));
  }
  // the departure from the linear term is quadratic
  CHECK(dev[0] / dev[1] == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("relative eigenvalue deviation is linear in lambda") {
  const auto basis = ModeBasis::string(1.0, 30);
  auto dev = [&](double lam) {
    const auto sp = spectrum_of(basis, kCos2, lam);
    return ((sp.eigenvalues - basis.eigenvalues()).array() / basis.eigenvalues().array()).abs().maxCoeff();
  };
  CHECK(dev(1e-3) / dev(1e-4) == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("density bound surfaces as a factorization error") {
  const auto basis = ModeBasis::string(1.0, 10);
  const auto table = build_sigma_table(basis, kCos2, 1);
  CHECK_THROWS_AS(assemble(basis, table, 1.5), ValidationError);
  GeneralizedProblem bad{basis.eigenvalues(), MatrixXd::Identity(10, 10)};
  bad.mass(0, 0) = -1.0;
  CHECK_THROWS_AS(solve_spectrum(bad), FactorizationError);
}

TEST_CASE("direct sum on the homogeneous string") {
  const auto basis = ModeBasis::string(1.0, 2000);
  const auto sp = spectrum_of(basis, kZero, 0.0);
  const double z = z_direct(sp.eigenvalues, 1.5, basis, 1.0);
  const double tail = tail_estimate(basis, 1.5, 1500);
  CHECK(std::abs(z - oracle::kZeta3 / std::pow(oracle::kPi, 3)) <= 2 * tail);
  CHECK_THROWS_AS(z_direct(sp.eigenvalues, 0.5, basis, 1.0), ValidationError);
}

TEST_CASE("direct sums form a Cauchy sequence in the retained count") {
  const DensityProfile profile = kCos2;
  std::vector<double> z;
  std::vector<double> tails;
  for (int m : {80, 160, 320}) {
    const auto basis = ModeBasis::string(1.0, m);
    const auto sp = spectrum_of(basis, profile, 0.1);
    z.push_back(z_direct(sp.eigenvalues, 1.5, basis, weyl_scale(basis, profile, 0.1)));
    tails.push_back(tail_estimate(basis, 1.5, m - m / 4));
  }
  CHECK(std::abs(z[1] - z[0]) <= tails[0]);
  CHECK(std::abs(z[2] - z[1]) <= tails[1]);
}

TEST_CASE("slope fit") {
  CHECK(least_squares_slope({1, 2, 3}, {2, 4, 6}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(least_squares_slope({1}, {1}), ValidationError);

  const auto basis = ModeBasis::string(1.0, 400);
  const std::vector<double> lambdas{0.02, 0.04, 0.08, 0.16};
  const auto table = build_sigma_table(basis, kCos2, 2);
  ConvergenceSettings settings;
  const auto full = convergence_order_fit(1.5, basis, kCos2, table, lambdas, settings);
  CHECK(full.slope >= 2.7);
  CHECK(full.points.size() == 4);
  CHECK(full.floor > 0.0);
  settings.first_order_only = true;
  const auto first = convergence_order_fit(1.5, basis, kCos2, table, lambdas, settings);
  CHECK(first.slope == doctest::Approx(2.0).epsilon(0.1));
  CHECK(first.first_order_only);

  CHECK_THROWS_AS(convergence_order_fit(1.5, basis, kCos2, table, {0.02, 0.04}, settings), ValidationError);
  CHECK_THROWS_AS(convergence_order_fit(1.5, basis, kCos2, table, {0.02, -0.04, 0.08}, settings), ValidationError);
}

TEST_CASE("fit excludes points below the floor") {
  // tiny lambdas put the second-order error under the homogeneous floor
  const auto basis = ModeBasis::string(1.0, 200);
  const auto table = build_sigma_table(basis, kCos2, 2);
  const auto r = convergence_order_fit(1.5, basis, kCos2, table, {1e-6, 2e-6, 0.05, 0.1, 0.2}, {200});
  CHECK(!r.excluded.empty());
  int used = 0;
  for (const auto& p : r.points) used += p.used;
  CHECK(used >= 3);
  CHECK_THROWS_AS(convergence_order_fit(1.5, basis, kCos2, table, {1e-7, 2e-7, 4e-7, 0.1}, {200}), NumericalError);
}
