// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/// Text output. CSV: header row, comma separated, LF endings. Floats are
/// written with 17 significant digits in both CSV and JSON.

#pragma once

#include "billzeta/core.hpp"
#include "billzeta/oracle.hpp"
#include "billzeta/sum_rules.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace billzeta {

/// "%.17g"; non-finite values become "nan", "inf", "-inf".
std::string format_double(double value);

/// JSON number text; non-finite values become null.
std::string json_number(double value);
std::string json_string(std::string_view text);

void write_results_csv(std::ostream& out, const std::vector<SumRuleResult>& results);
void write_results_json(std::ostream& out, const std::vector<SumRuleResult>& results,
                        const std::vector<std::string>& extra_members = {});

struct RouteDifference {
  std::string label;
  double lambda = 0.0;
  Route a = Route::ClosedForm;
  Route b = Route::ClosedForm;
  double absolute = 0.0;
  double relative = 0.0;
};

/// Pairwise |z_total| differences between routes sharing (label, lambda).
std::vector<RouteDifference> pairwise_differences(const std::vector<SumRuleResult>& results);
void write_differences_csv(std::ostream& out, const std::vector<RouteDifference>& diffs);
std::string differences_json(const std::vector<RouteDifference>& diffs);

void write_spectrum_csv(std::ostream& out, const VectorXd& eigenvalues);
void write_spectrum_json(std::ostream& out, double lambda, const VectorXd& eigenvalues);

/// (row, col, value) with 1-based indices, every entry.
void write_matrix_csv(std::ostream& out, const MatrixXd& matrix);

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceReport>& reports, double threshold);
void write_convergence_json(std::ostream& out, const std::vector<ConvergenceReport>& reports, double threshold);

/// Writes through a temporary file and renames. Throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace billzeta
