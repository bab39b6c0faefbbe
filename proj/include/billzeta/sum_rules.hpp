// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/// Spectral zeta function Z(s) = sum_n E_n^{-s} of the heterogeneous problem to
/// second order in lambda. Three routes:
///
///   closed form      one expression in s, shared by every rational order
///   trace 1 + 1/N    Z = tr(Q q^[1/N]), expanded order by order
///   trace 1/N + 1/N' Z = tr(q^[1/N] q^[1/N']), expanded order by order
///
/// Closed form (completed, i.e. after summing <n|sigma|m><m|sigma|n> over m):
///
///   Z0 = sum_n eps_n^{-s}
///   Z1 = lambda s sum_n <n|sigma|n> eps_n^{-s}
///   Z2 = (lambda^2/2) s [ (s-1) sum_n <n|sigma|n>^2 eps_n^{-s}
///                         + sum_{n != m} K(eps_n, eps_m; s) <n|sigma|m>^2 ]
///   K(a, b; s) = (a^{1-s} - b^{1-s}) / (b - a),   K(a, a; s) = (s-1) a^{-s}.
///
/// The unsplit form keeps <n|sigma^2|n> and the pre-split kernel
/// ((b + 3a) a^{-s} - (3b + a) b^{-s}) / (b - a); at finite truncation it is
/// what the trace routes reduce to exactly.

#pragma once

#include "billzeta/basis.hpp"
#include "billzeta/core.hpp"
#include "billzeta/green.hpp"

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace billzeta {

enum class DiagonalMode { Truncated, Resummed };
enum class SecondOrderForm { Completed, Unsplit };
enum class Route { ClosedForm, TraceOnePlusInv, TraceInvSum, Oracle };

std::string_view to_string(DiagonalMode mode);
std::string_view to_string(Route route);

/// s = 1 + 1/N or s = 1/N + 1/N', carried as integers.
class RationalOrder {
 public:
  enum class Kind { OnePlusInv, InvSum };

  static RationalOrder one_plus_inv(int n);
  static RationalOrder inv_sum(int n, int n_prime);
  /// Accepts "1+1/N", "1/N+1/N'", a fraction "p/q", an integer or a decimal;
  /// the value is mapped onto one of the two decompositions.
  static RationalOrder parse(std::string_view text);

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  int n_prime() const { return n_prime_; }
  double s() const;
  /// "1+1/4" or "1/2+1/3".
  std::string label() const;

  friend bool operator==(const RationalOrder&, const RationalOrder&) = default;

 private:
  RationalOrder(Kind kind, int n, int n_prime) : kind_(kind), n_(n), n_prime_(n_prime) {}
  Kind kind_;
  int n_;
  int n_prime_;
};

/// s > 1/2 on the string, s > 1 on the rectangle.
void require_convergent(double s, const ModeBasis& basis);

struct SumRuleResult {
  double s = 0.0;
  std::string label;
  double lambda = 0.0;
  double z0 = 0.0;  ///< includes tail_estimate
  double z1 = 0.0;
  double z2 = 0.0;
  double resummation_correction = 0.0;
  double z_total = 0.0;
  double tail_estimate = 0.0;
  int truncation = 0;
  Route route = Route::ClosedForm;
  DiagonalMode diagonal_mode = DiagonalMode::Truncated;
};

// ---------------------------------------------------------------------------
// Kernels

namespace detail {

template <typename Scalar>
Scalar inverse_power(Scalar e, Scalar s) {
  using std::exp;
  using std::log;
  return exp(-s * log(e));
}

}  // namespace detail

/// K(en, em; s) = (en^{1-s} - em^{1-s}) / (em - en), evaluated through
/// expm1/log1p so that nearly equal arguments keep full precision; the analytic
/// limit (s-1) en^{-s} is used once |em - en| < rtol * en. Exactly symmetric.
template <typename Scalar>
Scalar kernel_second_order(Scalar en, Scalar em, Scalar s, Scalar rtol = Scalar(1e-14)) {
  using std::expm1;
  using std::log1p;
  const Scalar lo = en < em ? en : em;
  const Scalar hi = en < em ? em : en;
  const Scalar h = (hi - lo) / lo;
  if (h < rtol) return (s - Scalar(1)) * detail::inverse_power(lo, s);
  return -detail::inverse_power(lo, s) * expm1((Scalar(1) - s) * log1p(h)) / h;
}

/// ((em + 3 en) en^{-s} - (3 em + en) em^{-s}) / (em - en), diagonal limit
/// 2 (2s - 1) en^{-s}. Rewritten with em = en (1 + h) to avoid cancellation.
template <typename Scalar>
Scalar kernel_pre_split(Scalar en, Scalar em, Scalar s, Scalar rtol = Scalar(1e-14)) {
  using std::abs;
  using std::expm1;
  using std::log1p;
  const Scalar h = (em - en) / en;
  const Scalar base = detail::inverse_power(en, s);
  if (abs(h) < rtol) return Scalar(2) * (Scalar(2) * s - Scalar(1)) * base;
  const Scalar g = expm1(-s * log1p(h));  // (1+h)^{-s} - 1
  return base * (Scalar(-2) - (Scalar(4) + Scalar(3) * h) * g / h);
}

/// Additive estimate of sum_{n > M} eps_n^{-s} from the leading Weyl law.
/// String: integral of (pi n / L)^{-2s} over n > M + 1/2. Rectangle: integral
/// over the complement of the lattice region x, y >= 1/2 whose area equals M.
/// Accurate to about +-50 % of itself.
double tail_estimate(const ModeBasis& basis, double s, int retained);

// ---------------------------------------------------------------------------
// Per-order formulas on raw spectra and matrices

template <typename Scalar>
struct ZetaOrders {
  Scalar z0{0};
  Scalar z1{0};
  Scalar z2{0};
  Scalar resummation{0};
};

/// Closed-form Z0, Z1, Z2 without the truncation tail.
/// `s2` is required for the unsplit form only.
template <typename Scalar>
ZetaOrders<Scalar> zeta_closed_form_orders(const Vector<Scalar>& eigenvalues, const Matrix<Scalar>& s1,
                                           const Matrix<Scalar>* s2, Scalar s, Scalar lambda,
                                           DiagonalMode mode = DiagonalMode::Truncated,
                                           SecondOrderForm form = SecondOrderForm::Completed) {
  const Eigen::Index size = eigenvalues.size();
  if (s1.rows() != size || s1.cols() != size) throw ValidationError("sigma matrix does not match the spectrum");
  if (form == SecondOrderForm::Unsplit && (!s2 || s2->rows() != size))
    throw ValidationError("unsplit closed form needs <n|sigma^2|m>");
  if (form == SecondOrderForm::Unsplit && mode == DiagonalMode::Resummed)
    throw ValidationError("diagonal resummation applies to the completed closed form only");

  Vector<Scalar> weight(size);
  for (Eigen::Index n = 0; n < size; ++n) weight(n) = detail::inverse_power(eigenvalues(n), s);
  const Vector<Scalar> diag = s1.diagonal();

  ZetaOrders<Scalar> out;
  out.z0 = pairwise_sum(weight);
  out.z1 = lambda * s * pairwise_sum(diag.cwiseProduct(weight));

  std::vector<Scalar> off;
  off.reserve(static_cast<std::size_t>(size) * (size - 1) / 2);
  if (form == SecondOrderForm::Completed) {
    for (Eigen::Index n = 0; n < size; ++n)
      for (Eigen::Index m = n + 1; m < size; ++m)
        if (s1(n, m) != Scalar(0))
          off.push_back(kernel_second_order(eigenvalues(n), eigenvalues(m), s) * s1(n, m) * s1(m, n));
    const Scalar diagonal = (s - Scalar(1)) * pairwise_sum(diag.cwiseAbs2().cwiseProduct(weight));
    out.z2 = lambda * lambda / Scalar(2) * s * (diagonal + Scalar(2) * pairwise_sum(off));
  } else {
    for (Eigen::Index n = 0; n < size; ++n)
      for (Eigen::Index m = n + 1; m < size; ++m)
        if (s1(n, m) != Scalar(0))
          off.push_back(kernel_pre_split(eigenvalues(n), eigenvalues(m), s) * s1(n, m) * s1(m, n));
    std::vector<Scalar> diagonal(size);
    for (Eigen::Index n = 0; n < size; ++n)
      diagonal[n] = -(*s2)(n, n) * weight(n) +
                    Scalar(0.5) * kernel_pre_split(eigenvalues(n), eigenvalues(n), s) * diag(n) * diag(n);
    out.z2 = lambda * lambda / Scalar(4) * s * (pairwise_sum(diagonal) + pairwise_sum(off));
  }

  if (mode == DiagonalMode::Resummed) {
    using std::pow;
    std::vector<Scalar> corr(size);
    for (Eigen::Index n = 0; n < size; ++n) {
      const Scalar x = lambda * diag(n);
      corr[n] = weight(n) * (pow(Scalar(1) + x, s) - Scalar(1) - s * x - Scalar(0.5) * s * (s - Scalar(1)) * x * x);
    }
    out.resummation = pairwise_sum(corr);
  }
  return out;
}

/// tr(A B) expanded to second order for A = sum lambda^k a[k], B = sum lambda^k b[k].
template <typename Scalar>
ZetaOrders<Scalar> trace_orders(const std::vector<Matrix<Scalar>>& a, const std::vector<Matrix<Scalar>>& b,
                                Scalar lambda) {
  if (a.size() < 3 || b.size() < 3) throw ValidationError("trace route needs coefficients through order 2");
  ZetaOrders<Scalar> out;
  out.z0 = trace_of_product(a[0], b[0]);
  out.z1 = lambda * (trace_of_product(a[0], b[1]) + trace_of_product(a[1], b[0]));
  out.z2 = lambda * lambda *
           (trace_of_product(a[1], b[1]) + trace_of_product(a[2], b[0]) + trace_of_product(a[0], b[2]));
  return out;
}

/// Exact finite-truncation difference (unsplit - completed) of the closed form:
/// (lambda^2 s / 4) sum_n eps_n^{-s} ((S_1 S_1)[n,n] - S_2[n,n]). Vanishes when
/// the basis is complete.
template <typename Scalar>
Scalar completeness_defect(const Vector<Scalar>& eigenvalues, const Matrix<Scalar>& s1, const Matrix<Scalar>& s2,
                           Scalar s, Scalar lambda) {
  std::vector<Scalar> terms(eigenvalues.size());
  for (Eigen::Index n = 0; n < eigenvalues.size(); ++n)
    terms[n] = detail::inverse_power(eigenvalues(n), s) * (s1.row(n).squaredNorm() - s2(n, n));
  return lambda * lambda * s / Scalar(4) * pairwise_sum(terms);
}

// ---------------------------------------------------------------------------
// Routes

SumRuleResult z_closed_form(const RationalOrder& order, const SigmaPowerTable& table, const ModeBasis& basis,
                            double lambda, DiagonalMode mode = DiagonalMode::Truncated,
                            SecondOrderForm form = SecondOrderForm::Completed);

/// Same as above for an arbitrary real s in the convergent range.
SumRuleResult z_closed_form(double s, const SigmaPowerTable& table, const ModeBasis& basis, double lambda,
                            DiagonalMode mode = DiagonalMode::Truncated,
                            SecondOrderForm form = SecondOrderForm::Completed);

SumRuleResult z_via_trace_one_plus_inv(int n, const SigmaPowerTable& table, const ModeBasis& basis, double lambda);

SumRuleResult z_via_trace_inv_sum(int n, int n_prime, const SigmaPowerTable& table, const ModeBasis& basis,
                                  double lambda);

/// Dispatches to the trace route matching the decomposition of `order`.
SumRuleResult z_via_trace(const RationalOrder& order, const SigmaPowerTable& table, const ModeBasis& basis,
                          double lambda);

}  // namespace billzeta
