// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace billzeta {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Precondition or input violation. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (factorization, quadrature). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FactorizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Wider type used for matrix-product accumulation; identity when no wider
/// hardware type is available.
template <typename Scalar>
struct accumulator {
  using type = Scalar;
};
template <>
struct accumulator<double> {
  using type = long double;
};
template <typename Scalar>
using accumulator_t = typename accumulator<Scalar>::type;

/// Pairwise (tree) summation. Deterministic for a fixed input order.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    T acc{0};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values.data(), values.size()));
}

template <typename Derived>
typename Derived::Scalar pairwise_sum(const Eigen::DenseBase<Derived>& values) {
  using T = typename Derived::Scalar;
  const auto plain = values.derived().eval();
  std::vector<T> flat(plain.data(), plain.data() + plain.size());
  return pairwise_sum(flat);
}

/// Sum of A(i,j) * B(j,i), i.e. trace(A * B) without forming the product.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar trace_of_product(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b) {
  return pairwise_sum(a.cwiseProduct(b.transpose()));
}

/// Largest absolute entry of A - A^T.
template <typename Derived>
typename Derived::Scalar asymmetry(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return typename Derived::Scalar(0);
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace billzeta
