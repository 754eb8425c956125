// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/events.hpp"
#include "symx/engine/platform.hpp"
#include "symx/engine/state.hpp"

#include <atomic>
#include <chrono>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace symx::engine
{
enum class Strategy : std::uint8_t
{
    Fifo,
    Lifo,
    Random
};

/// "fifo", "lifo", "random"; throws ParseError.
Strategy parse_strategy(std::string_view text);

struct EngineConfig
{
    unsigned workers = 1;
    Strategy strategy = Strategy::Fifo;
    std::uint64_t seed = 0;
    Policy default_policy = Policy::all();
    std::optional<std::size_t> max_states;
    std::optional<std::uint64_t> max_instructions;
    std::optional<std::chrono::milliseconds> wall_clock;
    smt::SolverConfig solver = smt::SolverConfig::from_environment();
    /// Retain terminated states for inspection after run().
    bool keep_terminated = false;
};

/// Totals accumulated over every run() of an engine.
struct Report
{
    std::size_t states_created = 0;
    std::size_t ready = 0;
    std::size_t suspended = 0;
    std::size_t terminated = 0;
    std::size_t abandoned = 0;
    std::size_t testcases = 0;
    /// Concretizations that produced two or more children.
    std::size_t forks = 0;
    std::size_t children = 0;
    std::size_t concretizations = 0;
    std::size_t instructions = 0;
    /// States discarded in flight when a limit stopped the run.
    std::size_t dropped = 0;
    bool timed_out = false;
    bool limit_reached = false;
    double wall_seconds = 0;
    std::map<std::string, std::size_t> by_reason;
};

/// Receives every terminated, non-abandoned state. Called concurrently from
/// workers.
class TestcaseSink
{
public:
    virtual ~TestcaseSink() = default;
    /// `model` is absent when the solver could not decide the state.
    virtual void save(const State& state, const std::optional<Model>& model, const Platform& platform) = 0;
};

class Engine
{
public:
    explicit Engine(const Platform& platform, EngineConfig config = {});
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    EventBus& events() noexcept { return events_; }
    HookRegistry& hooks() noexcept { return hooks_; }
    const EngineConfig& config() const noexcept { return config_; }
    const Platform& platform() const noexcept { return platform_; }

    void set_sink(TestcaseSink* sink) { sink_ = sink; }

    /// Creates a Ready state owning `context` and queues it.
    State& add_state(std::unique_ptr<PlatformContext> context);

    /// Ready states queued for the next run (materialized if serialized).
    std::vector<State*> ready_states();

    /// Explores until no Ready state remains or a limit is hit. Suspended
    /// states become Ready again for the next call. Throws Error if a
    /// backend fails; completed test cases are kept.
    const Report& run();

    const Report& report() const noexcept { return report_; }

    /// Terminated states (only with keep_terminated).
    const std::vector<std::unique_ptr<State>>& terminated() const noexcept { return terminated_; }

    /// Solver for use between runs (e.g. when preparing states).
    smt::Solver& solver();

    std::uint64_t next_state_id() { return next_id_.fetch_add(1); }

private:
    friend class Worker;
    using Item = std::variant<std::unique_ptr<State>, std::string>;

    void push(std::unique_ptr<State> state);
    std::unique_ptr<State> materialize(Item item) const;

    const Platform& platform_;
    EngineConfig config_;
    EventBus events_;
    HookRegistry hooks_;
    TestcaseSink* sink_ = nullptr;
    std::unique_ptr<smt::Solver> solver_;

    std::deque<Item> queue_;
    std::mutex* push_mutex_ = nullptr;
    std::vector<std::unique_ptr<State>> suspended_;
    std::vector<std::unique_ptr<State>> terminated_;
    std::atomic<std::uint64_t> next_id_{0};
    Report report_;
};

}  // namespace symx::engine
