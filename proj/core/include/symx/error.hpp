// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace symx
{
struct Error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Ill-sorted or out-of-range expression construction.
struct SortError : Error
{
    using Error::Error;
};

/// The external solver could not be launched or broke protocol.
struct SolverUnavailable : Error
{
    using Error::Error;
};

/// The solver answered `unknown` (usually a timeout).
struct SolverUnknown : Error
{
    using Error::Error;
};

/// A model was requested for an unsatisfiable context.
struct NoModel : Error
{
    using Error::Error;
};

struct ParseError : Error
{
    using Error::Error;
};

struct LoadError : Error
{
    using Error::Error;
};

}  // namespace symx
