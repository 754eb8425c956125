// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/smt/constraints.hpp"

#include "symx/error.hpp"
#include "symx/smt/simplify.hpp"

namespace symx::smt
{
void ConstraintSet::add(const Expr& assertion)
{
    if (!assertion || !assertion.sort().is_bool())
        throw SortError("constraint must be a Bool expression");
    Expr a = simplify(assertion);
    if (a.is_true())
        return;
    if (a.is_false())
        trivially_unsat_ = true;
    collect_variables(a, declarations_);
    assertions_.push_back(std::move(a));
}

void ConstraintSet::declare(const Expr& variable)
{
    if (!variable.is_variable())
        throw SortError("declare() expects a variable");
    auto [it, inserted] = declarations_.emplace(variable.name(), variable.sort());
    if (!inserted && it->second != variable.sort())
        throw SortError("variable " + variable.name() + " redeclared with a different sort");
}

ConstraintSet ConstraintSet::fork() const
{
    ConstraintSet child = *this;
    child.inherited_ = assertions_.size();
    return child;
}

bool ConstraintSet::extends(const ConstraintSet& ancestor) const
{
    if (ancestor.assertions_.size() > assertions_.size())
        return false;
    for (std::size_t i = 0; i < ancestor.assertions_.size(); ++i)
        if (!(ancestor.assertions_[i] == assertions_[i]))
            return false;
    return true;
}

Expr ConstraintSet::conjunction() const
{
    Expr all = Expr::boolean(true);
    for (const auto& a : assertions_)
        all = land(all, a);
    return all;
}

}  // namespace symx::smt
