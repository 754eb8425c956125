// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/events.hpp"
#include "symx/engine/state.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace symx::engine
{
/// The instruction retired; keep going.
struct Continue
{
};

/// `expression` must be made concrete before execution can proceed. A Bool
/// expression forks on its truth value (setter receives 0 or 1).
struct Concretize
{
    smt::Expr expression;
    /// Engine default when unset.
    std::optional<Policy> policy;
    /// Installs the chosen value into each child. May be empty.
    std::function<void(State&, const Word&)> setter;
    /// Domain restriction appended to every child together with the value
    /// equality; values outside it are never enumerated.
    std::optional<smt::Expr> guard;
    /// The instruction has not retired: children execute it again with the
    /// value available through State::binding.
    bool reexecute = false;
};

struct Terminate
{
    Termination reason;
};

/// The state is parked outside the ready queue (e.g. between transactions).
struct Suspend
{
};

using StepResult = std::variant<Continue, Concretize, Terminate, Suspend>;

struct StepEnv
{
    smt::Solver& solver;
    const EventBus& events;
    /// Filled by the backend; delivered with did_execute_instruction.
    InstructionInfo instruction;
};

/// Named output files for one test case ("stdin" -> bytes, ...).
using TestcaseFiles = std::map<std::string, std::string>;
using Model = std::map<std::string, Word>;

/// An execution backend. Implementations are shared by all workers and must
/// not keep per-state mutable data outside the state's context.
class Platform
{
public:
    virtual ~Platform() = default;

    /// Stable identifier written into serialized states.
    virtual std::string_view tag() const = 0;

    /// Pre-execution location of the next instruction.
    virtual std::uint64_t location(const State& state) const = 0;

    /// Attempts exactly one instruction.
    virtual StepResult step(State& state, StepEnv& env) const = 0;

    /// Backend-specific files for a terminated state, given a model over its
    /// inputs (unconstrained inputs map to 0).
    virtual TestcaseFiles render_testcase(const State& state, const Model& model) const = 0;

    virtual std::unique_ptr<PlatformContext> deserialize_context(BlobReader& in) const = 0;
};

/// Rebuilds a state written by State::serialize.
std::unique_ptr<State> deserialize_state(std::string_view blob, const Platform& platform);

}  // namespace symx::engine
