// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return symx::cli::main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
