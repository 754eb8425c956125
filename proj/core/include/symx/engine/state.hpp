// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/blob.hpp"
#include "symx/smt/constraints.hpp"
#include "symx/smt/solver.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symx::engine
{
enum class Status : std::uint8_t
{
    Ready,
    Busy,
    Terminated
};

enum class TerminationKind : std::uint8_t
{
    Exit,
    MemoryViolation,
    InvalidInstruction,
    Revert,
    OutOfGas,
    Abandoned,
    SolverUnknown
};

struct Termination
{
    TerminationKind kind = TerminationKind::Exit;
    /// Exit code or faulting address; unused for the other kinds.
    Word detail = 0;

    static Termination exit(const Word& code) { return {TerminationKind::Exit, code}; }
    static Termination memory_violation(const Word& address) { return {TerminationKind::MemoryViolation, address}; }
    static Termination invalid_instruction() { return {TerminationKind::InvalidInstruction, 0}; }
    static Termination revert() { return {TerminationKind::Revert, 0}; }
    static Termination out_of_gas() { return {TerminationKind::OutOfGas, 0}; }
    static Termination abandoned() { return {TerminationKind::Abandoned, 0}; }
    static Termination solver_unknown() { return {TerminationKind::SolverUnknown, 0}; }

    friend bool operator==(const Termination&, const Termination&) = default;
};

std::string_view to_string(TerminationKind k);

/// Machine-readable form, e.g. "exit 7", "memory-violation 0x0", "revert".
std::string to_string(const Termination& t);
/// Inverse of to_string; throws ParseError.
Termination parse_termination(std::string_view text);

struct Policy
{
    enum class Kind : std::uint8_t
    {
        All,
        One,
        MinMax
    };
    Kind kind = Kind::All;
    std::size_t cap = 64;

    static Policy all(std::size_t cap = 64) { return {Kind::All, cap}; }
    static Policy one() { return {Kind::One, 1}; }
    static Policy minmax() { return {Kind::MinMax, 2}; }
};

std::string_view to_string(Policy::Kind k);
/// "all", "one", "minmax"; throws ParseError.
Policy parse_policy(std::string_view text);

/// Backend-owned machine state.
class PlatformContext
{
public:
    virtual ~PlatformContext() = default;
    virtual std::unique_ptr<PlatformContext> clone() const = 0;
    virtual void serialize(BlobWriter& out) const = 0;
};

struct InputSymbol
{
    smt::Expr variable;
    /// Where the symbol came from: "stdin:3", "argv:1:0", "tx:0:value", ...
    std::string provenance;
};

class Engine;
class Platform;
class Worker;

class State
{
public:
    State(std::uint64_t id, std::unique_ptr<PlatformContext> context);
    State(const State&) = delete;
    State& operator=(const State&) = delete;

    std::uint64_t id() const noexcept { return id_; }
    Status status() const noexcept { return status_; }
    const std::optional<Termination>& termination() const noexcept { return termination_; }

    smt::ConstraintSet& constraints() noexcept { return constraints_; }
    const smt::ConstraintSet& constraints() const noexcept { return constraints_; }

    template <class T>
    T& context()
    {
        return dynamic_cast<T&>(*context_);
    }
    template <class T>
    const T& context() const
    {
        return dynamic_cast<const T&>(*context_);
    }
    PlatformContext& platform_context() noexcept { return *context_; }

    /// Declares `variable` and records it as a test-case input.
    void register_input(const smt::Expr& variable, std::string provenance);
    const std::vector<InputSymbol>& inputs() const noexcept { return inputs_; }

    const std::vector<std::uint64_t>& trace() const noexcept { return trace_; }
    void append_trace(std::uint64_t location) { trace_.push_back(location); }

    std::size_t child_counter() const noexcept { return child_counter_; }
    std::optional<std::uint64_t> parent_id() const noexcept { return parent_id_; }

    void add_message(std::string text) { messages_.push_back(std::move(text)); }
    const std::vector<std::string>& messages() const noexcept { return messages_; }

    // Operations available to hooks and backends while the state is Busy.

    bool can_be_true(const smt::Expr& cond);
    bool must_be_true(const smt::Expr& cond);
    /// One feasible value of `e` under the current constraints.
    Word solve_one(const smt::Expr& e);
    /// Appends a constraint; feasibility is checked lazily.
    void constrain(const smt::Expr& cond);
    /// Terminates the state as Abandoned once the current callback returns.
    void abandon() { abandon_requested_ = true; }
    bool abandon_requested() const noexcept { return abandon_requested_; }

    /// Solver of the worker executing this state; throws outside a step.
    smt::Solver& solver();

    /// Concrete value bound to `e` by an earlier concretization of the
    /// instruction currently being (re-)executed.
    std::optional<Word> binding(const smt::Expr& e) const;
    /// Constant value, or the bound value, else nullopt.
    std::optional<Word> concrete(const smt::Expr& e) const;

    /// Deep copy with a fresh id, recorded as a child of this state.
    std::unique_ptr<State> spawn(std::uint64_t child_id);

    void serialize(BlobWriter& out, std::string_view platform_tag) const;

private:
    friend class Engine;
    friend class Worker;
    friend std::unique_ptr<State> deserialize_state(std::string_view, const Platform&);

    std::uint64_t id_;
    Status status_ = Status::Ready;
    std::optional<Termination> termination_;
    smt::ConstraintSet constraints_;
    std::unique_ptr<PlatformContext> context_;
    std::vector<InputSymbol> inputs_;
    std::vector<std::uint64_t> trace_;
    std::size_t child_counter_ = 0;
    std::optional<std::uint64_t> parent_id_;
    std::vector<std::string> messages_;
    std::vector<std::pair<smt::Expr, Word>> bindings_;
    /// Set on children of a concretization that re-runs the same instruction.
    bool resume_ = false;
    bool abandon_requested_ = false;
    smt::Solver* solver_ = nullptr;
};

}  // namespace symx::engine
