// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/// Subcommand drivers behind the command-line tool. Each validates the whole
/// configuration first, writes results to `out` (or to the configured path)
/// and reports failures on `err` as one line of JSON.

#pragma once

#include "billzeta/config.hpp"

#include <ostream>

namespace billzeta {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitSlopeBelowThreshold = 4,
};

int cmd_sumrule(const RunConfig& config, std::ostream& out, std::ostream& err);

/// q_k.csv and Q_k.csv for k = 0..max_order plus residuals.csv, written into
/// the output directory (default "coeffs").
int cmd_coeffs(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);

/// {"error": kind, "command": name, "message": text} on one line.
void report_error(std::ostream& err, std::string_view command, std::string_view kind, std::string_view message);

}  // namespace billzeta
