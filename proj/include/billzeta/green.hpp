// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/// Spectral coefficients of the dressed Green's function G = sqrt(Sigma) G0 sqrt(Sigma)
/// (matrices Q^(k)) and of its order-1/N root (matrices q^(k)), order by order in
/// lambda, in the basis of the homogeneous problem.
///
/// The defining identity is the N-fold per-order convolution
///
///   sum_{j1 + ... + jN = k} q^(j1) ... q^(jN) = Q^(k).
///
/// Because q^(0) = diag(eps^{-1/N}) is diagonal, the only term containing the
/// unknown q^(k) is eta o q^(k) (elementwise), so every order is solved by a
/// single elementwise division.

#pragma once

#include "billzeta/basis.hpp"
#include "billzeta/core.hpp"
#include "billzeta/kernels.hpp"

#include <algorithm>
#include <string>
#include <type_traits>
#include <vector>

namespace billzeta {

enum class CoefficientSource { GenericRecursion, ClosedForm };

template <typename Scalar>
struct GreenCoefficientSet {
  int root_order = 2;
  int max_order = 0;
  std::vector<Matrix<Scalar>> q;  ///< q[k], k = 0..max_order
  std::vector<Matrix<Scalar>> Q;  ///< Q[k], k = 0..max_order
  CoefficientSource source = CoefficientSource::GenericRecursion;

  int size() const { return q.empty() ? 0 : static_cast<int>(q.front().rows()); }
};

/// Generalized binomial coefficient binom(1/2, k) by the product recurrence.
template <typename Scalar>
Scalar half_binomial(int k) {
  Scalar b(1);
  for (int i = 1; i <= k; ++i) b *= (Scalar(0.5) - Scalar(i - 1)) / Scalar(i);
  return b;
}

namespace detail {

template <typename Scalar>
void require_matching(const BasicSigmaPowerTable<Scalar>& table, const Vector<Scalar>& eigenvalues) {
  if (table.size() != eigenvalues.size())
    throw ValidationError("sigma table size " + std::to_string(table.size()) + " does not match " +
                          std::to_string(eigenvalues.size()) + " eigenvalues");
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) require_positive(eigenvalues(i));
}

template <typename Scalar>
Matrix<Scalar> symmetrized(const Matrix<Scalar>& a) {
  return (a + a.transpose()) * Scalar(0.5);
}

/// W_t[n, m] = sum_{a=0}^{t-1} d_n^a d_m^{t-1-a}; W_N = eta.
template <typename Scalar>
Matrix<Scalar> placement_weights(const Vector<Scalar>& d, int t) {
  const Eigen::Index size = d.size();
  Matrix<Scalar> w = Matrix<Scalar>::Zero(size, size);
  for (int a = 0; a < t; ++a)
    w += d.array().pow(Scalar(a)).matrix() * d.array().pow(Scalar(t - 1 - a)).matrix().transpose();
  return w;
}

template <typename Scalar>
Vector<Scalar> inverse_roots(const Vector<Scalar>& eigenvalues, int n) {
  Vector<Scalar> d(eigenvalues.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = inverse_root_power(eigenvalues(i), 1, n);
  return d;
}

}  // namespace detail

/// Q^(k)[n,m] = sum_j binom(1/2,j) binom(1/2,k-j) sum_r S_j[n,r] S_{k-j}[r,m] / eps_r,
/// with the r-sum truncated at the table size.
template <typename Scalar>
Matrix<Scalar> build_Q_order(int k, const BasicSigmaPowerTable<Scalar>& table, const Vector<Scalar>& eigenvalues) {
  detail::require_matching(table, eigenvalues);
  if (k < 0 || k > table.max_power())
    throw ValidationError("Q^(" + std::to_string(k) + ") needs sigma powers up to " + std::to_string(k) +
                          ", table has J = " + std::to_string(table.max_power()));
  using Acc = accumulator_t<Scalar>;
  const Vector<Acc> inv = eigenvalues.template cast<Acc>().cwiseInverse();
  const Eigen::Index size = eigenvalues.size();
  Matrix<Acc> out = Matrix<Acc>::Zero(size, size);
  // pair (j, k-j) with (k-j, j) so the result is symmetric by construction
  for (int j = 0; 2 * j <= k; ++j) {
    const Acc weight = half_binomial<Acc>(j) * half_binomial<Acc>(k - j);
    const Matrix<Acc> left = table.power(j).template cast<Acc>();
    const Matrix<Acc> right = table.power(k - j).template cast<Acc>();
    const Matrix<Acc> x = left * (inv.asDiagonal() * right);
    if (2 * j == k)
      out += weight * (x + x.transpose()) * Acc(0.5);
    else
      out += weight * (x + x.transpose());
  }
  return out.template cast<Scalar>();
}

/// Explicit solutions for k = 0, 1, 2:
///   q^(0) = diag(eps^{-1/N})
///   q^(1) = (1/2) Delta o S_1
///   q^(2) = -(1/8) Delta o S_2
///           + 1/(4 eta) sum_r S_1[n,r] S_1[r,m] (1/eps_r - Delta_nr Delta_rm xi_nrm)
template <typename Scalar>
Matrix<Scalar> q_closed_form(RootOrder n, int k, const BasicSigmaPowerTable<Scalar>& table,
                             const Vector<Scalar>& eigenvalues) {
  detail::require_matching(table, eigenvalues);
  if (k < 0 || k > 2) throw ValidationError("closed-form q^(k) exists for k <= 2; use the generic recursion");
  if (k > table.max_power()) throw ValidationError("closed-form q^(k) needs sigma powers up to k");
  const Eigen::Index size = eigenvalues.size();
  if (k == 0) return detail::inverse_roots(eigenvalues, n).asDiagonal();

  const auto kernels = kernel_matrices(n, eigenvalues);
  if (k == 1) return Scalar(0.5) * kernels.delta.cwiseProduct(table.power(1));

  std::vector<RootLadder<Scalar>> ladders;
  ladders.reserve(size);
  for (Eigen::Index i = 0; i < size; ++i) ladders.emplace_back(eigenvalues(i), n);
  const auto& s1 = table.power(1);
  Matrix<Scalar> out = Scalar(-0.125) * kernels.delta.cwiseProduct(table.power(2));
  for (Eigen::Index r = 0; r < size; ++r)
    for (Eigen::Index c = r; c < size; ++c) {
      accumulator_t<Scalar> acc(0);
      for (Eigen::Index s = 0; s < size; ++s) {
        const Scalar weight = Scalar(1) / eigenvalues(s) -
                              kernels.delta(r, s) * kernels.delta(s, c) * xi(ladders[r], ladders[s], ladders[c], n);
        acc += s1(r, s) * s1(s, c) * weight;
      }
      const Scalar v = out(r, c) + static_cast<Scalar>(acc) / (Scalar(4) * kernels.eta(r, c));
      out(r, c) = v;
      out(c, r) = v;
    }
  return out;
}

template <typename Scalar>
GreenCoefficientSet<Scalar> q_closed_form_set(RootOrder n, int max_order, const BasicSigmaPowerTable<Scalar>& table,
                                              const Vector<Scalar>& eigenvalues) {
  GreenCoefficientSet<Scalar> set;
  set.root_order = n;
  set.max_order = max_order;
  set.source = CoefficientSource::ClosedForm;
  for (int k = 0; k <= max_order; ++k) {
    set.q.push_back(q_closed_form(n, k, table, eigenvalues));
    set.Q.push_back(build_Q_order(k, table, eigenvalues));
  }
  return set;
}

/// Order-by-order solution of the N-fold convolution identity, k = 0..max_order.
/// Products accumulate in extended precision.
template <typename Scalar>
GreenCoefficientSet<Scalar> q_generic_recursion(RootOrder n, int max_order, const BasicSigmaPowerTable<Scalar>& table,
                                                const Vector<Scalar>& eigenvalues) {
  detail::require_matching(table, eigenvalues);
  if (max_order < 0 || max_order > table.max_power())
    throw ValidationError("recursion order K = " + std::to_string(max_order) + " exceeds table power J = " +
                          std::to_string(table.max_power()));
  using Acc = accumulator_t<Scalar>;
  const int copies = n;
  const Eigen::Index size = eigenvalues.size();
  const Vector<Acc> d = detail::inverse_roots<Acc>(eigenvalues.template cast<Acc>(), n);

  // W[t] for t = 1..N; W[N] is eta.
  std::vector<Matrix<Acc>> weights(copies + 1);
  for (int t = 1; t <= copies; ++t) weights[t] = detail::placement_weights(d, t);
  const Matrix<Acc>& eta_matrix = weights[copies];
  if ((eta_matrix.array() <= Acc(0)).any()) throw NumericalError("eta vanished: spectrum is not positive");

  GreenCoefficientSet<Scalar> set;
  set.root_order = n;
  set.max_order = max_order;
  set.source = CoefficientSource::GenericRecursion;

  // powers[t][i] = coefficient of lambda^i in (sum_j lambda^j q^(j))^t
  std::vector<std::vector<Matrix<Acc>>> powers(copies + 1);
  for (int t = 1; t <= copies; ++t) powers[t].push_back(Matrix<Acc>(d.array().pow(Acc(t)).matrix().asDiagonal()));
  std::vector<Matrix<Acc>> q{Matrix<Acc>(d.asDiagonal())};

  set.q.push_back(q[0].template cast<Scalar>());
  set.Q.push_back(build_Q_order(0, table, eigenvalues));

  for (int k = 1; k <= max_order; ++k) {
    set.Q.push_back(build_Q_order(k, table, eigenvalues));
    // coefficient k of every power with q^(k) set to zero
    std::vector<Matrix<Acc>> partial(copies + 1);
    partial[1] = Matrix<Acc>::Zero(size, size);
    for (int t = 2; t <= copies; ++t) {
      Matrix<Acc> acc = d.asDiagonal() * partial[t - 1];
      for (int j = 1; j < k; ++j) acc.noalias() += q[j] * powers[t - 1][k - j];
      partial[t] = std::move(acc);
    }
    Matrix<Acc> qk = (set.Q[k].template cast<Acc>() - partial[copies]).cwiseQuotient(eta_matrix);
    qk = detail::symmetrized(qk);
    for (int t = 1; t <= copies; ++t) powers[t].push_back(partial[t] + qk.cwiseProduct(weights[t]));
    set.q.push_back(qk.template cast<Scalar>());
    q.push_back(std::move(qk));
  }
  return set;
}

/// Max-abs residual of the N-fold product identity at order k on the leading
/// (M - b) x (M - b) block. b < 0 selects the default b = M / 4.
template <typename Scalar>
Scalar verify_convolution(const GreenCoefficientSet<Scalar>& set, int k, int boundary_discard = -1) {
  if (k < 0 || k > set.max_order) throw ValidationError("verify_convolution: order outside the set");
  using Acc = accumulator_t<Scalar>;
  const int size = set.size();
  const int b = boundary_discard < 0 ? size / 4 : boundary_discard;
  const int inner = std::max(0, size - b);
  if (inner == 0) return Scalar(0);

  std::vector<Matrix<Acc>> base;
  for (int j = 0; j <= k; ++j) base.push_back(set.q[j].template cast<Acc>());
  std::vector<Matrix<Acc>> product = base;
  for (int copy = 1; copy < set.root_order; ++copy) {
    std::vector<Matrix<Acc>> next;
    for (int i = 0; i <= k; ++i) {
      Matrix<Acc> acc = Matrix<Acc>::Zero(size, size);
      for (int j = 0; j <= i; ++j) acc.noalias() += base[j] * product[i - j];
      next.push_back(std::move(acc));
    }
    product = std::move(next);
  }
  const Matrix<Acc> diff = product[k] - set.Q[k].template cast<Acc>();
  return static_cast<Scalar>(diff.topLeftCorner(inner, inner).cwiseAbs().maxCoeff());
}

/// <n|sqrt(Sigma)|m> from the binomial series sum_j binom(1/2, j) lambda^j S_j.
template <typename Scalar>
Matrix<Scalar> sqrt_density_series(const BasicSigmaPowerTable<Scalar>& table, Scalar lambda) {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(table.size(), table.size());
  Scalar scale(1);
  for (int j = 0; j <= table.max_power(); ++j) {
    out += half_binomial<Scalar>(j) * scale * table.power(j);
    scale *= lambda;
  }
  return out;
}

/// Leading-term resummation for N = 2: q ~ Delta o <n|sqrt(Sigma)|m>. An
/// approximation; exact only through first order in lambda.
template <typename Scalar>
Matrix<Scalar> q_resummed_approx(const Vector<Scalar>& eigenvalues, const Matrix<Scalar>& sqrt_density) {
  if (sqrt_density.rows() != eigenvalues.size() || sqrt_density.cols() != eigenvalues.size())
    throw ValidationError("sqrt(Sigma) matrix does not match the spectrum");
  return kernel_matrices(RootOrder{2}, eigenvalues).delta.cwiseProduct(sqrt_density);
}

}  // namespace billzeta
