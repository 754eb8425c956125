// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/expr.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace symx::engine
{
class State;
struct Termination;

enum class EventKind : std::uint8_t
{
    WillExecuteInstruction,
    DidExecuteInstruction,
    MemoryRead,
    MemoryWrite,
    StateForked,
    StateTerminated,
    SymbolicTransactionApplied,
};
inline constexpr std::size_t kEventKinds = 7;

/// What a backend reports about the instruction it just executed.
struct InstructionInfo
{
    std::string mnemonic;
    std::uint32_t opcode = 0;
    std::vector<smt::Expr> operands;
    std::vector<smt::Expr> results;

    void clear()
    {
        mnemonic.clear();
        opcode = 0;
        operands.clear();
        results.clear();
    }
};

/// Payload of every event. Only the fields relevant to `kind` are set.
struct Event
{
    EventKind kind;
    State& state;
    std::uint64_t location = 0;
    const InstructionInfo* instruction = nullptr;
    /// Memory events.
    smt::Expr address{};
    smt::Expr value{};
    unsigned size = 0;
    /// StateForked: the retired parent and the value the child committed to.
    const State* parent = nullptr;
    Word fork_value = 0;
    /// StateTerminated.
    const Termination* termination = nullptr;
};

using EventCallback = std::function<void(const Event&)>;
using HookCallback = std::function<void(State&)>;

/// Subscribers per event kind, invoked in registration order on the worker
/// executing the state. Register before Engine::run.
class EventBus
{
public:
    void subscribe(EventKind kind, EventCallback callback);
    void emit(const Event& event) const;
    bool has_subscribers(EventKind kind) const { return !subscribers_[index(kind)].empty(); }

private:
    static std::size_t index(EventKind k) { return static_cast<std::size_t>(k); }
    std::array<std::vector<EventCallback>, kEventKinds> subscribers_;
};

/// Callbacks keyed by pre-execution location.
class HookRegistry
{
public:
    void add(std::uint64_t location, HookCallback callback);
    /// Null when nothing is registered at `location`.
    const std::vector<HookCallback>* at(std::uint64_t location) const;
    bool empty() const noexcept { return hooks_.empty(); }

private:
    std::map<std::uint64_t, std::vector<HookCallback>> hooks_;
};

}  // namespace symx::engine
