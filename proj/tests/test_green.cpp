// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/green.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace billzeta;

namespace {

SigmaPowerTable table_of(const oracle::RandomSystem& sys) { return SigmaPowerTable(sys.s); }

}  // namespace

TEST_CASE("binomial(1/2, k)") {
  const double expected[] = {1.0,       0.5,        -1.0 / 8,      1.0 / 16,         -5.0 / 128,
                             7.0 / 256, -21.0 / 1024, 33.0 / 2048, -429.0 / 32768};
  for (int k = 0; k < 9; ++k) CHECK(half_binomial<double>(k) == doctest::Approx(expected[k]).epsilon(1e-15));
}

TEST_CASE("dressed Green coefficients through second order") {
  const auto sys = oracle::random_system(7, 3, 3);
  const auto t = table_of(sys);
  const MatrixXd d = sys.eps.cwiseInverse().asDiagonal();
  const auto& s1 = sys.s[1];
  const auto& s2 = sys.s[2];
  CHECK(oracle::max_rel(build_Q_order(0, t, sys.eps), d) < 1e-15);
  CHECK(oracle::max_rel(build_Q_order(1, t, sys.eps), 0.5 * (s1 * d + d * s1)) < 1e-14);
  CHECK(oracle::max_rel(build_Q_order(2, t, sys.eps), -0.125 * (s2 * d + d * s2) + 0.25 * s1 * d * s1) < 1e-14);
  CHECK_THROWS_AS(build_Q_order(4, t, sys.eps), ValidationError);
}

TEST_CASE("Q series sums to sqrt(Sigma) G0 sqrt(Sigma) for a commuting profile") {
  // with S_j = diag(x^j) everything commutes: Q = (1 + l x) / eps exactly
  const int m = 5;
  VectorXd x(m), e(m);
  x << 0.3, -0.2, 0.5, 0.1, -0.4;
  e << 1.0, 2.5, 4.0, 7.0, 11.0;
  std::vector<MatrixXd> s;
  for (int j = 0; j <= 12; ++j) s.push_back(x.array().pow(j).matrix().asDiagonal());
  const SigmaPowerTable t(s);
  const double lam = 0.5;
  MatrixXd total = MatrixXd::Zero(m, m);
  for (int k = 0; k <= 12; ++k) total += std::pow(lam, k) * build_Q_order(k, t, e);
  for (int i = 0; i < m; ++i) CHECK(total(i, i) == doctest::Approx((1 + lam * x(i)) / e(i)).epsilon(1e-5));
}

TEST_CASE("recursion equals the closed forms through second order for every N") {
  for (int n = 1; n <= 6; ++n) {
    const auto sys = oracle::random_system(8, 2, 100 + n);
    const auto t = table_of(sys);
    const auto rec = q_generic_recursion(RootOrder{n}, 2, t, sys.eps);
    const auto closed = q_closed_form_set(RootOrder{n}, 2, t, sys.eps);
    for (int k = 0; k <= 2; ++k) CHECK(oracle::max_rel(rec.q[k], closed.q[k]) < 1e-12);
    CHECK(oracle::max_rel(rec.q[1], oracle::q1_general(n, sys.eps, sys.s[1])) < 1e-12);
    if (n >= 2) CHECK(oracle::max_rel(rec.q[2], oracle::q2_general(n, sys.eps, sys.s[1], sys.s[2])) < 1e-11);
    VectorXd q0 = sys.eps.array().pow(-1.0 / n);
    CHECK(oracle::max_rel(rec.q[0], MatrixXd(q0.asDiagonal())) < 1e-15);
  }
}

TEST_CASE("square-root third order display") {
  const auto sys = oracle::random_system(8, 3, 77);
  const auto rec = q_generic_recursion(RootOrder{2}, 3, table_of(sys), sys.eps);
  const MatrixXd explicit3 = oracle::q3_half(sys.eps, sys.s[1], sys.s[2], sys.s[3], true);
  CHECK(oracle::max_rel(rec.q[3], explicit3) < 1e-11);
  // with 1/eps_r in the double sums the display does not solve the order-3 equation
  const MatrixXd literal3 = oracle::q3_half(sys.eps, sys.s[1], sys.s[2], sys.s[3], false);
  CHECK(oracle::max_rel(rec.q[3], literal3) > 1e-4);
}

TEST_CASE("square-root implicit displays up to eighth order") {
  for (unsigned seed : {5u, 6u, 7u}) {
    const auto sys = oracle::random_system(8, 8, seed);
    const auto rec = q_generic_recursion(RootOrder{2}, 8, table_of(sys), sys.eps);
    std::vector<MatrixXd> q(rec.q.begin(), rec.q.end());
    for (int k = 2; k <= 8; ++k) {
      const MatrixXd rhs = oracle::implicit_rhs(k, sys.eps, sys.s, q, true);
      CAPTURE(k);
      CHECK(oracle::max_rel(rec.q[k], rhs) < 1e-10);
    }
    // printed weights at k = 4 and 8 are off as transcribed
    CHECK(oracle::max_rel(rec.q[4], oracle::implicit_rhs(4, sys.eps, sys.s, q, false)) > 1e-4);
    CHECK(oracle::max_rel(rec.q[8], oracle::implicit_rhs(8, sys.eps, sys.s, q, false)) > 1e-4);
  }
}

TEST_CASE("recursion satisfies the N-fold convolution at every order") {
  for (int n : {2, 3, 5}) {
    const auto sys = oracle::random_system(8, 6, 900 + n);
    const auto set = q_generic_recursion(RootOrder{n}, 6, table_of(sys), sys.eps);
    for (int k = 0; k <= 6; ++k) {
      const double scale = set.Q[k].cwiseAbs().maxCoeff();
      CHECK(verify_convolution(set, k, 0) <= 1e-12 * scale);
    }
    for (const auto& qk : set.q) CHECK(asymmetry(qk) == 0.0);
  }
}

TEST_CASE("zero profile leaves only the homogeneous order") {
  const int m = 6;
  VectorXd e(m);
  e << 1, 4, 9, 16, 25, 36;
  std::vector<MatrixXd> s{MatrixXd::Identity(m, m)};
  for (int j = 1; j <= 4; ++j) s.push_back(MatrixXd::Zero(m, m));
  const auto set = q_generic_recursion(RootOrder{3}, 4, SigmaPowerTable(s), e);
  for (int k = 1; k <= 4; ++k) CHECK(set.q[k].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("recursion preconditions") {
  const auto sys = oracle::random_system(4, 2, 1);
  CHECK_THROWS_AS(q_generic_recursion(RootOrder{2}, 3, table_of(sys), sys.eps), ValidationError);
  VectorXd bad = sys.eps;
  bad(2) = -1.0;
  CHECK_THROWS_AS(q_generic_recursion(RootOrder{2}, 2, table_of(sys), bad), ValidationError);
  CHECK_THROWS_AS(q_closed_form(RootOrder{2}, 3, table_of(sys), sys.eps), ValidationError);
  CHECK_THROWS_AS(verify_convolution(q_generic_recursion(RootOrder{2}, 1, table_of(sys), sys.eps), 2),
                  ValidationError);
}

TEST_CASE("extended-precision scalar runs the same recursion") {
  const auto sys = oracle::random_system(6, 3, 42);
  const auto t = table_of(sys);
  const auto d = q_generic_recursion(RootOrder{3}, 3, t, sys.eps);
  const auto l = q_generic_recursion(RootOrder{3}, 3, t.cast<long double>(), Vector<long double>(sys.eps.cast<long double>()));
  for (int k = 0; k <= 3; ++k) CHECK(oracle::max_rel(l.q[k].cast<double>(), d.q[k]) < 1e-13);
}

TEST_CASE("leading-term resummation is exact through first order") {
  const auto sys = oracle::random_system(6, 6, 8);
  const auto t = table_of(sys);
  const auto set = q_generic_recursion(RootOrder{2}, 2, t, sys.eps);
  std::vector<double> err;
  for (double lam : {0.02, 0.01}) {
    const MatrixXd approx = q_resummed_approx(sys.eps, sqrt_density_series(t, lam));
    const MatrixXd first = set.q[0] + lam * set.q[1];
    err.push_back((approx - first).cwiseAbs().maxCoeff());
  }
  // residual is second order in lambda
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}
