// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

namespace billzeta {

/// Entry point of the billzeta tool with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace billzeta
