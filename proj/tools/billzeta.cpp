// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return billzeta::run_cli(argc, argv, std::cout, std::cerr); }
