// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/engine.hpp"
#include "symx/native/memory.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace symx::cli
{
enum class Mode
{
    Native,
    Evm,
    Replay
};

enum ExitCode : int
{
    kOk = 0,
    kUsage = 2,
    kTimeout = 3,
    kInternal = 4,
};

struct Config
{
    Mode mode = Mode::Native;
    std::filesystem::path target;
    /// Native: program arguments after argv[0]; '+' marks a symbolic byte.
    std::vector<std::string> argv_specs;
    /// Native: concrete stdin prefix.
    std::vector<std::uint8_t> data;
    /// Native: symbolic stdin bytes after the prefix.
    std::size_t stdin_size = 256;
    unsigned procs = 1;
    std::size_t txlimit = 1;
    std::size_t txdatasize = 36;
    std::uint64_t gas = 10'000'000;
    double timeout = 300;
    engine::Policy policy = engine::Policy::all();
    native::MemoryModel memory_model = native::MemoryModel::ConcretizingAddress;
    engine::Strategy strategy = engine::Strategy::Fifo;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> workspace;
    /// Whitespace separated solver command; overrides $SYMX_SOLVER.
    std::optional<std::string> solver;
    bool detect_overflow = false;
    /// Replay: the workspace and test id to re-run.
    std::size_t test_id = 0;
};

/// Thrown for malformed command lines and unusable inputs.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Parses argv (argv[0] is the program name). Throws UsageError. Returns
/// nullopt after printing help to `out`.
std::optional<Config> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Runs a parsed configuration and returns the process exit status.
int run(const Config& config, std::ostream& out, std::ostream& err);

/// parse_args then run, mapping every failure to an exit status.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symx::cli
