// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/constraints.hpp"
#include "symx/smt/expr.hpp"
#include "symx/smt/smtlib.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace symx::smt
{
enum class Verdict
{
    Sat,
    Unsat,
    Unknown
};

std::string_view to_string(Verdict v);

struct SolverResult
{
    Verdict verdict = Verdict::Unknown;
    /// Present only when Sat and values were requested.
    std::optional<std::map<std::string, Word>> model;
};

struct SolverConfig
{
    /// Executable and arguments; the solver must read SMT-LIB 2 on stdin.
    std::vector<std::string> command{"z3", "-in", "-smt2"};
    std::chrono::milliseconds timeout{30'000};
    std::string logic{kDefaultLogic};

    /// Command from $SYMX_SOLVER (whitespace separated) if set, else the default.
    static SolverConfig from_environment();
};

struct SolverStats
{
    std::size_t queries = 0;
    std::size_t sat = 0;
    std::size_t unsat = 0;
    std::size_t unknown = 0;
    std::size_t restarts = 0;
};

class SolverProcess;

/// A single-owner session with an external SMT solver. One query in flight
/// at a time; each exploration worker owns its own session.
class Solver
{
public:
    explicit Solver(SolverConfig config = SolverConfig::from_environment());
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    /// Satisfiability of the assertions conjoined with `extra`.
    SolverResult check(const ConstraintSet& cs, const std::optional<Expr>& extra = std::nullopt);

    /// One model value of each expression in a single query. Throws NoModel
    /// when unsatisfiable and SolverUnknown on unknown.
    std::vector<Word> get_values(const ConstraintSet& cs, const std::vector<Expr>& exprs,
        const std::optional<Expr>& extra = std::nullopt);
    Word get_value(const ConstraintSet& cs, const Expr& e, const std::optional<Expr>& extra = std::nullopt);

    /// Model over the named variables; variables absent from the assertions
    /// are completed with 0.
    std::map<std::string, Word> model(const ConstraintSet& cs, const std::vector<Expr>& variables);

    bool can_be_true(const ConstraintSet& cs, const Expr& cond);
    bool must_be_true(const ConstraintSet& cs, const Expr& cond);

    /// Distinct feasible values of `e`, found by model blocking, in discovery
    /// order. Fewer than `cap` values means the enumeration is exhaustive.
    std::vector<Word> all_values(const ConstraintSet& cs, const Expr& e, std::size_t cap,
        const std::optional<Expr>& extra = std::nullopt);

    /// Smallest / largest feasible unsigned value of `e` (binary search).
    Word min_value(const ConstraintSet& cs, const Expr& e, const std::optional<Expr>& extra = std::nullopt);
    Word max_value(const ConstraintSet& cs, const Expr& e, const std::optional<Expr>& extra = std::nullopt);

    bool incremental() const noexcept { return incremental_; }
    const SolverStats& stats() const noexcept { return stats_; }
    const SolverConfig& config() const noexcept { return config_; }

private:
    struct Query;
    SolverResult run(const ConstraintSet& cs, const std::vector<Expr>& extra, const std::vector<Expr>& values);
    SolverResult run_incremental(const ConstraintSet& cs, const std::vector<Expr>& extra, const std::vector<Expr>& values);
    SolverResult run_one_shot(const ConstraintSet& cs, const std::vector<Expr>& extra, const std::vector<Expr>& values);
    void start();
    void restart();

    SolverConfig config_;
    std::unique_ptr<SolverProcess> process_;
    std::set<std::string> declared_;
    bool incremental_ = true;
    SolverStats stats_;
};

}  // namespace symx::smt
