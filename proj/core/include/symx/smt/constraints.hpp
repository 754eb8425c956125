// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/expr.hpp"

#include <map>
#include <string>
#include <vector>

namespace symx::smt
{
/// Ordered path predicate. Children created by fork() inherit every
/// assertion of the parent; the lineage is append-only.
class ConstraintSet
{
public:
    ConstraintSet() = default;

    /// Appends a Bool assertion (simplified first). Constant `true` is dropped.
    void add(const Expr& assertion);

    /// Declares a variable that may not (yet) occur in any assertion.
    void declare(const Expr& variable);

    const std::vector<Expr>& assertions() const noexcept { return assertions_; }
    const std::map<std::string, Sort>& declarations() const noexcept { return declarations_; }
    bool empty() const noexcept { return assertions_.empty(); }
    std::size_t size() const noexcept { return assertions_.size(); }

    /// True when some assertion simplified to `false`.
    bool trivially_unsat() const noexcept { return trivially_unsat_; }

    /// Copy that records this set as its parent.
    ConstraintSet fork() const;

    /// Number of assertions inherited from the parent at fork time.
    std::size_t inherited() const noexcept { return inherited_; }

    /// True when `ancestor`'s assertions form a prefix of this set's.
    bool extends(const ConstraintSet& ancestor) const;

    /// Conjunction of all assertions (true for the empty set).
    Expr conjunction() const;

private:
    std::vector<Expr> assertions_;
    std::map<std::string, Sort> declarations_;
    std::size_t inherited_ = 0;
    bool trivially_unsat_ = false;
};

}  // namespace symx::smt
