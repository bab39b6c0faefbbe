// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/// Homogeneous Dirichlet eigenbasis (string / rectangle), density profiles and
/// the tables of matrix elements <n|sigma^j|m> built on top of them.

#pragma once

#include "billzeta/core.hpp"

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace billzeta {

// ---------------------------------------------------------------------------
// Density profiles

/// sigma(x) = sum_k c_k cos(k pi x / L), k = 0, 1, ...
struct FourierCosine {
  std::vector<double> coefficients;
};

/// sigma(x) = sum_k c_k x^k, x the physical coordinate in [0, L].
struct Polynomial {
  std::vector<double> coefficients;
};

/// Piecewise-linear interpolation of (nodes, values). Nodes strictly
/// increasing and covering [0, L].
struct Tabulated {
  std::vector<double> nodes;
  std::vector<double> values;
};

using Profile1D = std::variant<FourierCosine, Polynomial, Tabulated>;

enum class Combine { Product, Sum };

/// 2D profile sigma(x, y) = sx(x) * sy(y) or sx(x) + sy(y).
struct SeparableProfile {
  Profile1D x;
  Profile1D y;
  Combine combine = Combine::Product;
};

using DensityProfile = std::variant<Profile1D, SeparableProfile>;

double evaluate(const Profile1D& profile, double x, double length);
double evaluate(const DensityProfile& profile, double x, double y, double a, double b);

/// Canonical text form; stable across runs, used for cache keys.
std::string describe(const Profile1D& profile);
std::string describe(const DensityProfile& profile);

/// Density Sigma = 1 + lambda * sigma.
struct DensityPerturbation {
  DensityProfile profile;
  double lambda = 0.0;
};

// ---------------------------------------------------------------------------
// Mode basis

enum class BasisKind { String1D, Rectangle2D };

struct ModeIndex {
  int j = 1;
  int k = 0;  // 0 for the string
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// First M Dirichlet modes, sorted by ascending eigenvalue; ties broken by the
/// lexicographic order of the multi-index.
class ModeBasis {
 public:
  static ModeBasis string(double length, int modes);
  static ModeBasis rectangle(double a, double b, int modes);

  BasisKind kind() const { return kind_; }
  int dimension() const { return kind_ == BasisKind::String1D ? 1 : 2; }
  int size() const { return static_cast<int>(modes_.size()); }
  double length_x() const { return a_; }
  double length_y() const { return b_; }
  /// Length (1D) or area (2D).
  double measure() const { return kind_ == BasisKind::String1D ? a_ : a_ * b_; }

  /// 1-based mode index, 1 <= n <= size().
  double eigenvalue(int n) const;
  const ModeIndex& mode(int n) const;
  const VectorXd& eigenvalues() const { return eigenvalues_; }
  const std::vector<ModeIndex>& modes() const { return modes_; }

  /// Largest 1D mode number along each axis among the retained modes.
  int max_mode_x() const;
  int max_mode_y() const;

  /// Same geometry, different truncation.
  ModeBasis truncated(int modes) const;

  std::string describe() const;

 private:
  ModeBasis(BasisKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  BasisKind kind_;
  double a_;
  double b_;
  std::vector<ModeIndex> modes_;
  VectorXd eigenvalues_;
};

// ---------------------------------------------------------------------------
// Matrix elements

struct QuadratureSettings {
  /// 0 selects the automatic node count 8 * (max mode + bandwidth * J).
  int nodes = 0;
  /// Use exact cosine-series convolution for FourierCosine profiles.
  bool analytic_fourier = true;
  /// Required agreement between the rule and its refinement.
  double tolerance = 1e-12;
};

struct QuadratureMeta {
  std::string rule;
  int nodes = 0;
  friend bool operator==(const QuadratureMeta&, const QuadratureMeta&) = default;
};

/// S_j[n, m] = <n|sigma^j|m> for 0 <= j <= J, 1 <= n, m <= M (stored 0-based).
template <typename Scalar>
class BasicSigmaPowerTable {
 public:
  BasicSigmaPowerTable() = default;
  explicit BasicSigmaPowerTable(std::vector<Matrix<Scalar>> powers, QuadratureMeta meta = {},
                                std::optional<double> profile_sup = std::nullopt)
      : powers_(std::move(powers)), meta_(std::move(meta)), profile_sup_(profile_sup) {
    if (powers_.empty()) throw ValidationError("sigma table needs at least the j = 0 matrix");
    for (const auto& p : powers_)
      if (p.rows() != powers_.front().rows() || p.cols() != p.rows())
        throw ValidationError("sigma table matrices must be square and of equal size");
  }

  int max_power() const { return static_cast<int>(powers_.size()) - 1; }
  int size() const { return powers_.empty() ? 0 : static_cast<int>(powers_.front().rows()); }
  const Matrix<Scalar>& power(int j) const {
    if (j < 0 || j > max_power()) throw ValidationError("sigma table: power " + std::to_string(j) + " not tabulated");
    return powers_[j];
  }
  const std::vector<Matrix<Scalar>>& powers() const { return powers_; }
  const QuadratureMeta& quadrature_meta() const { return meta_; }
  /// sup |sigma| over the domain when known.
  std::optional<double> profile_sup() const { return profile_sup_; }

  template <typename Other>
  BasicSigmaPowerTable<Other> cast() const {
    std::vector<Matrix<Other>> out;
    out.reserve(powers_.size());
    for (const auto& p : powers_) out.push_back(p.template cast<Other>());
    return BasicSigmaPowerTable<Other>(std::move(out), meta_, profile_sup_);
  }

  /// Leading M x M block of every power.
  BasicSigmaPowerTable truncated(int modes) const {
    std::vector<Matrix<Scalar>> out;
    for (const auto& p : powers_) out.push_back(p.topLeftCorner(modes, modes));
    return BasicSigmaPowerTable(std::move(out), meta_, profile_sup_);
  }

 private:
  std::vector<Matrix<Scalar>> powers_;
  QuadratureMeta meta_;
  std::optional<double> profile_sup_;
};

using SigmaPowerTable = BasicSigmaPowerTable<double>;

/// Cosine moments C_k = (1/L) int_0^L f(x)^power cos(k pi x / L) dx, k = 0..kmax.
/// <n|f^power|m> on the string equals C_{|n-m|} - C_{n+m}.
std::vector<double> cosine_moments(const Profile1D& profile, int power, double length, int kmax,
                                   const QuadratureSettings& settings = {},
                                   QuadratureMeta* meta = nullptr);

/// <n|sigma^j|m> for a single pair of 1-based mode indices.
double sigma_power_element(const ModeBasis& basis, const DensityProfile& profile, int j, int n, int m,
                           const QuadratureSettings& settings = {});

SigmaPowerTable build_sigma_table(const ModeBasis& basis, const DensityProfile& profile, int max_power,
                                  const QuadratureSettings& settings = {});

/// sup |sigma| estimated on a dense sample (plus tabulation nodes).
double profile_sup(const ModeBasis& basis, const DensityProfile& profile);

/// Throws ValidationError unless sup |lambda sigma| < 1.
void check_density_bound(double lambda, double sup);

/// <n|sqrt(1 + lambda sigma)|m> by direct quadrature (string basis only).
MatrixXd sqrt_density_matrix(const ModeBasis& basis, const Profile1D& profile, double lambda,
                             const QuadratureSettings& settings = {});

/// Ratio used to scale the Weyl tail of the heterogeneous problem:
/// (int sqrt(Sigma) dx / L)^2 in 1D, (int Sigma dA / A) in 2D.
double weyl_scale(const ModeBasis& basis, const DensityProfile& profile, double lambda);

}  // namespace billzeta
