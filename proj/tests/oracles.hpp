// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used only by the tests. Nothing here
// calls into the library's numerics; inputs and outputs are plain Eigen types.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;
constexpr double kZeta3 = 1.2020569031595942;

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_rel(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

// ---------------------------------------------------------------------------
// Matrix elements on the string [0, L], psi_n = sqrt(2/L) sin(n pi x / L).

/// <n|cos(k pi x / L)|m>, 1-based n, m.
inline double cosine_element(int k, int n, int m) {
  if (k == 0) return n == m ? 1.0 : 0.0;
  double v = 0.0;
  if (std::abs(n - m) == k) v += 0.5;
  if (n + m == k) v -= 0.5;
  return v;
}

/// <n|x|m> on [0, 1].
inline double linear_element(int n, int m) {
  const auto f = [](int a) {
    if (a == 0) return 0.5;
    const double sign = (a % 2 == 0) ? 1.0 : -1.0;
    return (sign - 1.0) / (a * a * kPi * kPi);
  };
  return f(n - m) - f(n + m);
}

/// Composite Simpson with `panels` (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// <n|g|m> by brute-force quadrature on the string.
inline double string_element(const std::function<double(double)>& g, double length, int n, int m,
                             int panels = 20000) {
  return simpson(
      [&](double x) {
        return 2.0 / length * std::sin(n * kPi * x / length) * std::sin(m * kPi * x / length) * g(x);
      },
      0.0, length, panels);
}

// ---------------------------------------------------------------------------
// Kernel rows for N = 1..4 as tabulated closed forms.

inline double eta_row(int n_root, double en, double em) {
  switch (n_root) {
    case 1:
      return 1.0;
    case 2:
      return 1.0 / std::sqrt(em) + 1.0 / std::sqrt(en);
    case 3:
      return 1.0 / (std::cbrt(em) * std::cbrt(en)) + 1.0 / std::pow(em, 2.0 / 3.0) + 1.0 / std::pow(en, 2.0 / 3.0);
    case 4:
      return 1.0 / (std::sqrt(std::sqrt(em)) * std::sqrt(en)) + 1.0 / (std::sqrt(em) * std::sqrt(std::sqrt(en))) +
             1.0 / std::pow(em, 0.75) + 1.0 / std::pow(en, 0.75);
  }
  return std::nan("");
}

inline double delta_row(int n_root, double en, double em) {
  return (1.0 / em + 1.0 / en) / eta_row(n_root, en, em);
}

inline double xi_row(int n_root, double en, double er, double em) {
  const auto q4 = [](double e) { return std::sqrt(std::sqrt(e)); };
  switch (n_root) {
    case 1:
      return 0.0;
    case 2:
      return 1.0;
    case 3:
      return 1.0 / std::cbrt(em) + 1.0 / std::cbrt(en) + 1.0 / std::cbrt(er);
    case 4:
      return 1.0 / (q4(em) * q4(en)) + 1.0 / (q4(em) * q4(er)) + 1.0 / std::sqrt(em) + 1.0 / (q4(en) * q4(er)) +
             1.0 / std::sqrt(en) + 1.0 / std::sqrt(er);
  }
  return std::nan("");
}

/// Generic kernels straight from the sum definitions with std::pow.
inline double eta_sum(int n_root, double en, double em) {
  double s = 0.0;
  for (int j = 0; j < n_root; ++j)
    s += 1.0 / (std::pow(en, double(n_root - 1 - j) / n_root) * std::pow(em, double(j) / n_root));
  return s;
}

inline double delta_sum(int n_root, double en, double em) { return (1.0 / en + 1.0 / em) / eta_sum(n_root, en, em); }

inline double xi_sum(int n_root, double en, double er, double em) {
  double s = 0.0;
  for (int j = 0; j <= n_root - 2; ++j)
    for (int l = 0; l <= n_root - 2 - j; ++l)
      s += 1.0 / (std::pow(en, double(j) / n_root) * std::pow(em, double(n_root - 2 - j - l) / n_root) *
                  std::pow(er, double(l) / n_root));
  return s;
}

// ---------------------------------------------------------------------------
// Random test systems.

struct RandomSystem {
  Vec eps;             // positive, distinct
  std::vector<Mat> s;  // s[0] = I, s[j] symmetric
};

inline RandomSystem random_system(int size, int max_power, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> spread(0.0, 1.0);
  RandomSystem sys;
  sys.eps.resize(size);
  double e = 1.0 + spread(rng);
  for (int i = 0; i < size; ++i) {
    sys.eps(i) = e;
    e *= 1.3 + spread(rng);
  }
  sys.s.push_back(Mat::Identity(size, size));
  for (int j = 1; j <= max_power; ++j) {
    Mat a(size, size);
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) a(r, c) = unit(rng);
    sys.s.push_back(0.5 * (a + a.transpose()));
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Explicit coefficient formulas.

inline Mat delta_matrix(int n_root, const Vec& eps) {
  Mat d(eps.size(), eps.size());
  for (int r = 0; r < eps.size(); ++r)
    for (int c = 0; c < eps.size(); ++c) d(r, c) = delta_sum(n_root, eps(r), eps(c));
  return d;
}

inline Mat eta_matrix(int n_root, const Vec& eps) {
  Mat d(eps.size(), eps.size());
  for (int r = 0; r < eps.size(); ++r)
    for (int c = 0; c < eps.size(); ++c) d(r, c) = eta_sum(n_root, eps(r), eps(c));
  return d;
}

/// General-N first order: (1/2) Delta o S1.
inline Mat q1_general(int n_root, const Vec& eps, const Mat& s1) {
  return 0.5 * delta_matrix(n_root, eps).cwiseProduct(s1);
}

/// General-N second order with the xi kernel.
inline Mat q2_general(int n_root, const Vec& eps, const Mat& s1, const Mat& s2) {
  const int m = static_cast<int>(eps.size());
  const Mat dl = delta_matrix(n_root, eps);
  const Mat et = eta_matrix(n_root, eps);
  Mat out(m, m);
  for (int n = 0; n < m; ++n)
    for (int k = 0; k < m; ++k) {
      double sum = 0.0;
      for (int r = 0; r < m; ++r)
        sum += s1(n, r) * s1(r, k) * (1.0 / eps(r) - dl(n, r) * dl(r, k) * xi_sum(n_root, eps(n), eps(r), eps(k)));
      out(n, k) = -0.125 * dl(n, k) * s2(n, k) + sum / (4.0 * et(n, k));
    }
  return out;
}

/// N = 2 third order. `use_eps_s` selects 1/eps_s in the two double sums (the
/// form implied by substituting the second-order solution); false keeps 1/eps_r.
inline Mat q3_half(const Vec& eps, const Mat& s1, const Mat& s2, const Mat& s3, bool use_eps_s = true) {
  const int m = static_cast<int>(eps.size());
  const Mat dl = delta_matrix(2, eps);
  const Mat et = eta_matrix(2, eps);
  Mat out(m, m);
  for (int n = 0; n < m; ++n)
    for (int k = 0; k < m; ++k) {
      double v = dl(n, k) * s3(n, k) / 16.0;
      for (int r = 0; r < m; ++r)
        v -= (1.0 / eps(r) - dl(n, r) * dl(r, k)) * (s1(n, r) * s2(r, k) + s2(n, r) * s1(r, k)) / (16.0 * et(n, k));
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
          const double inv_a = use_eps_s ? 1.0 / eps(s) : 1.0 / eps(r);
          v -= dl(n, r) / (8.0 * et(n, k) * et(r, k)) * (inv_a - dl(r, s) * dl(s, k)) * s1(n, r) * s1(r, s) *
               s1(s, k);
          v -= dl(r, k) / (8.0 * et(n, k) * et(n, r)) * (inv_a - dl(n, s) * dl(s, r)) * s1(n, s) * s1(s, r) *
               s1(r, k);
        }
      out(n, k) = v;
    }
  return out;
}

// N = 2, orders 2..8 in implicit form: q^(k) written through lower orders.
// Each display is
//   c_k Delta o S_k
//   + (sign/den) / eta * sum_r (1/eps_r) sum_(w,i,j) w S_i[n,r] S_j[r,m]
//   - 1/(2 eta) [ sum_(w,a,b) w q^(a) q^(b) + Delta_nr S_1[n,r] q^(k-1)_rm + Delta_rm q^(k-1)_nr S_1[r,m] ].
struct Term {
  double weight;
  int i;
  int j;
};

struct ImplicitDisplay {
  double leading;
  double sigma_scale;  // signed 1/den in front of the Delta_rr^2 sum
  std::vector<Term> sigma_pairs;
  std::vector<Term> q_pairs;
};

/// Transcribed displays for k = 2..8. `corrected` applies the two fixes the
/// per-order equation requires: weight 2 on q2 q2 at k = 4, and S_2 S_6 (not
/// S_2 S_4) in the weight-42 pair at k = 8.
inline ImplicitDisplay implicit_display(int k, bool corrected = true) {
  switch (k) {
    case 2:
      return {-1.0 / 8, 1.0 / 4, {{1, 1, 1}}, {{2, 1, 1}}};
    case 3:
      return {1.0 / 16, -1.0 / 16, {{1, 1, 2}, {1, 2, 1}}, {}};
    case 4:
      return {-5.0 / 128, 1.0 / 64, {{1, 2, 2}, {2, 3, 1}, {2, 1, 3}}, {{corrected ? 2.0 : 1.0, 2, 2}}};
    case 5:
      return {7.0 / 256, -1.0 / 256, {{2, 2, 3}, {2, 3, 2}, {5, 1, 4}, {5, 4, 1}}, {{2, 2, 3}, {2, 3, 2}}};
    case 6:
      return {-21.0 / 1024,
              1.0 / 1024,
              {{4, 3, 3}, {5, 2, 4}, {5, 4, 2}, {14, 1, 5}, {14, 5, 1}},
              {{2, 3, 3}, {2, 2, 4}, {2, 4, 2}}};
    case 7:
      return {33.0 / 2048,
              -1.0 / 2048,
              {{5, 3, 4}, {5, 4, 3}, {7, 2, 5}, {7, 5, 2}, {21, 1, 6}, {21, 6, 1}},
              {{2, 3, 4}, {2, 4, 3}, {2, 2, 5}, {2, 5, 2}}};
    case 8:
      return {-429.0 / 32768,
              1.0 / 16384,
              {{25, 4, 4},
               {28, 3, 5},
               {28, 5, 3},
               {42, 2, corrected ? 6 : 4},
               {42, corrected ? 6 : 4, 2},
               {132, 1, 7},
               {132, 7, 1}},
              {{2, 4, 4}, {2, 3, 5}, {2, 5, 3}, {2, 2, 6}, {2, 6, 2}}};
  }
  return {};
}

/// Right-hand side of the order-k display given S_0..S_k and q^(0..k-1).
inline Mat implicit_rhs(int k, const Vec& eps, const std::vector<Mat>& s, const std::vector<Mat>& q,
                        bool corrected = true) {
  const ImplicitDisplay d = implicit_display(k, corrected);
  const int m = static_cast<int>(eps.size());
  const Mat dl = delta_matrix(2, eps);
  const Mat et = eta_matrix(2, eps);
  const Vec inv = eps.cwiseInverse();
  Mat sigma_part = Mat::Zero(m, m);
  for (const auto& t : d.sigma_pairs) sigma_part += t.weight * s[t.i] * inv.asDiagonal() * s[t.j];
  Mat q_part = Mat::Zero(m, m);
  for (const auto& t : d.q_pairs) q_part += t.weight * q[t.i] * q[t.j];
  if (k >= 3) q_part += dl.cwiseProduct(s[1]) * q[k - 1] + q[k - 1] * dl.cwiseProduct(s[1]);
  return d.leading * dl.cwiseProduct(s[k]) + (d.sigma_scale * sigma_part - 0.5 * q_part).cwiseQuotient(et);
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigenvalues of a symmetric matrix.

inline Vec jacobi_eigenvalues(Mat a, double tol = 1e-15, int max_sweeps = 100) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= tol * tol * a.squaredNorm()) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  Vec ev = a.diagonal();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

/// Generalized eigenvalues of K c = E S c via S^{-1/2} K S^{-1/2} with Jacobi.
inline Vec generalized_eigenvalues(const Vec& k, const Mat& s) {
  const Eigen::SelfAdjointEigenSolver<Mat> es(s);
  const Mat half_inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                       es.eigenvectors().transpose();
  const Mat c = half_inv * k.asDiagonal() * half_inv;
  return jacobi_eigenvalues(0.5 * (c + c.transpose()));
}

// ---------------------------------------------------------------------------
// Spectral sums.

/// Sum of (n pi / L)^{-2s} for n = 1..count by Kahan summation, largest n first.
inline double string_zeta_partial(double s, int count, double length = 1.0) {
  double sum = 0.0, comp = 0.0;
  for (int n = count; n >= 1; --n) {
    const double y = std::pow(n * kPi / length, -2.0 * s) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

/// Rectangle eigenvalues pi^2 (j^2/a^2 + k^2/b^2), sorted, first `count`.
inline std::vector<double> rectangle_eigenvalues(double a, double b, int count) {
  std::vector<double> ev;
  const int reach = static_cast<int>(std::sqrt(4.0 * count * std::max(a, b) / std::min(a, b))) + 8;
  for (int j = 1; j <= reach * a / std::min(a, b) + 1; ++j)
    for (int k = 1; k <= reach * b / std::min(a, b) + 1; ++k)
      ev.push_back(kPi * kPi * (double(j * j) / (a * a) + double(k * k) / (b * b)));
  std::sort(ev.begin(), ev.end());
  ev.resize(std::min<std::size_t>(ev.size(), static_cast<std::size_t>(count)));
  return ev;
}

}  // namespace oracle
