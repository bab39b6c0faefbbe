// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/// Run configuration. JSON, versioned, unknown keys rejected. Every problem
/// found is collected and reported in one ValidationError.
///
///   {
///     "version": 1,
///     "basis": {"kind": "string", "length": 1.0},          // or rectangle with a, b
///     "density": {"type": "fourier_cosine", "coefficients": [0, 0, 1]},
///     "truncation": {"modes": 400, "quadrature_nodes": 0, "inner_discard": -1,
///                    "top_discard_fraction": 0.25, "max_power": 0},
///     "order": "3/2",                                      // or a list
///     "lambda": 0.1,                                       // or a list
///     "route": "closed",
///     "diagonal_mode": "truncated",
///     "output": {"format": "csv", "path": ""},
///     "cache_dir": "",
///     "deterministic": false,
///     "coefficients": {"root_order": 2, "max_order": 2},
///     "verify": {"threshold": 2.7, "first_order_only": false}
///   }
///
/// Density types: fourier_cosine {coefficients}, polynomial {coefficients},
/// tabulated {nodes, values}, separable {combine: product|sum, x, y}.

#pragma once

#include "billzeta/basis.hpp"
#include "billzeta/sum_rules.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace billzeta {

enum class OutputFormat { Csv, Json };
enum class RouteSelection { Closed, Trace1, Trace2, Oracle, All };

std::string_view to_string(OutputFormat format);
std::string_view to_string(RouteSelection route);

struct RunConfig {
  static constexpr int kVersion = 1;

  BasisKind basis_kind = BasisKind::String1D;
  double length_a = 1.0;
  double length_b = 1.0;
  DensityProfile density = Profile1D{FourierCosine{{0.0, 0.0, 1.0}}};

  int modes = 400;
  int quadrature_nodes = 0;      ///< 0 = automatic
  int inner_discard = -1;        ///< convolution residual boundary block, -1 = M/4
  double top_discard_fraction = 0.25;
  int max_power = 0;             ///< 0 = as needed

  std::vector<RationalOrder> orders{RationalOrder::one_plus_inv(2)};
  std::vector<double> lambdas{0.1};
  RouteSelection route = RouteSelection::Closed;
  DiagonalMode diagonal_mode = DiagonalMode::Truncated;

  OutputFormat format = OutputFormat::Csv;
  std::string output_path;
  std::string cache_dir;
  bool deterministic = false;

  int root_order = 2;
  int max_order = 2;

  double slope_threshold = 2.7;
  bool first_order_only = false;

  ModeBasis basis() const;
  QuadratureSettings quadrature() const;
};

/// Parse and validate. Throws ValidationError listing every violation.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);

/// Parse and run the cross-field checks for `command` in the same pass.
RunConfig parse_config(const nlohmann::json& doc, std::string_view command);

/// Normalized form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const DensityProfile& profile);

/// Cross-field preconditions for a subcommand ("sumrule", "coeffs", "verify",
/// "spectrum"), checked before any computation. Throws with all violations.
void validate_for(const RunConfig& config, std::string_view command);

}  // namespace billzeta
