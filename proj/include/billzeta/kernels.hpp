// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/// Eigenvalue kernels of the order-1/N perturbative solution:
///
///   eta(N; en, em)     = sum_{j=0}^{N-1} en^{-(N-1-j)/N} em^{-j/N}
///   delta(N; en, em)   = (1/en + 1/em) / eta(N; en, em)
///   xi(N; en, er, em)  = sum_{j=0}^{N-2} sum_{l=0}^{N-2-j} en^{-j/N} em^{-(N-2-j-l)/N} er^{-l/N}
///
/// eta is the denominator that isolates the new unknown at every order;
/// xi collects the placements of two first-order factors in an N-fold product.

#pragma once

#include "billzeta/core.hpp"

#include <cmath>
#include <string>

namespace billzeta {

/// Root order N of a Green's function of order 1/N.
class RootOrder {
 public:
  static constexpr int kMax = 64;

  explicit RootOrder(int n) : n_(n) {
    if (n < 1 || n > kMax)
      throw ValidationError("root order N = " + std::to_string(n) + " outside 1.." + std::to_string(kMax));
  }
  int value() const { return n_; }
  operator int() const { return n_; }

 private:
  int n_;
};

namespace detail {

template <typename Scalar>
void require_positive(Scalar e) {
  if (!(e > Scalar(0)) || !std::isfinite(static_cast<double>(e)))
    throw ValidationError("eigenvalue arguments must be positive and finite");
}

/// e^{-p/N}, computed as exp(-(p/N) log e).
template <typename Scalar>
Scalar inverse_root_power(Scalar e, int p, int n) {
  using std::exp;
  using std::log;
  if (p == 0) return Scalar(1);
  return exp(-(Scalar(p) / Scalar(n)) * log(e));
}

}  // namespace detail

/// Powers e^{-p/N} for p = 0..N, precomputed for repeated kernel evaluation.
template <typename Scalar>
class RootLadder {
 public:
  RootLadder(Scalar e, int n) : pow_(n + 1) {
    detail::require_positive(e);
    for (int p = 0; p <= n; ++p) pow_(p) = detail::inverse_root_power(e, p, n);
  }
  Scalar operator[](int p) const { return pow_(p); }

 private:
  Vector<Scalar> pow_;
};

template <typename Scalar>
Scalar eta(const RootLadder<Scalar>& en, const RootLadder<Scalar>& em, int n) {
  // mirrored terms paired so that eta(a, b) == eta(b, a) bit for bit
  Scalar acc(0);
  for (int j = 0; j < n / 2; ++j) acc += en[n - 1 - j] * em[j] + em[n - 1 - j] * en[j];
  if (n % 2) acc += en[n / 2] * em[n / 2];
  return acc;
}

template <typename Scalar>
Scalar eta(RootOrder n, Scalar en, Scalar em) {
  return eta(RootLadder<Scalar>(en, n), RootLadder<Scalar>(em, n), n);
}

template <typename Scalar>
Scalar delta(RootOrder n, Scalar en, Scalar em) {
  return (Scalar(1) / en + Scalar(1) / em) / eta(n, en, em);
}

template <typename Scalar>
Scalar xi(const RootLadder<Scalar>& en, const RootLadder<Scalar>& er, const RootLadder<Scalar>& em, int n) {
  Scalar acc(0);
  for (int j = 0; j <= n - 2; ++j)
    for (int l = 0; l <= n - 2 - j; ++l) acc += en[j] * em[n - 2 - j - l] * er[l];
  return acc;
}

template <typename Scalar>
Scalar xi(RootOrder n, Scalar en, Scalar er, Scalar em) {
  return xi(RootLadder<Scalar>(en, n), RootLadder<Scalar>(er, n), RootLadder<Scalar>(em, n), n);
}

/// Elementwise eta and delta over all pairs of a spectrum.
template <typename Scalar>
struct KernelMatrices {
  Matrix<Scalar> eta;
  Matrix<Scalar> delta;
};

template <typename Scalar>
KernelMatrices<Scalar> kernel_matrices(RootOrder n, const Vector<Scalar>& eigenvalues) {
  const Eigen::Index size = eigenvalues.size();
  std::vector<RootLadder<Scalar>> ladders;
  ladders.reserve(size);
  for (Eigen::Index i = 0; i < size; ++i) ladders.emplace_back(eigenvalues(i), n);
  KernelMatrices<Scalar> out{Matrix<Scalar>(size, size), Matrix<Scalar>(size, size)};
  for (Eigen::Index r = 0; r < size; ++r)
    for (Eigen::Index c = r; c < size; ++c) {
      const Scalar e = eta(ladders[r], ladders[c], n);
      const Scalar d = (Scalar(1) / eigenvalues(r) + Scalar(1) / eigenvalues(c)) / e;
      out.eta(r, c) = out.eta(c, r) = e;
      out.delta(r, c) = out.delta(c, r) = d;
    }
  return out;
}

}  // namespace billzeta
