// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/expr.hpp"

#include <map>
#include <string>

namespace symx::smt
{
/// Concrete value of a variable assignment. Unassigned variables evaluate to 0
/// (model completion), unassigned arrays to the all-zero array.
using Assignment = std::map<std::string, Word>;

/// Applies a bitvector/boolean operator to constant arguments. `arg_widths`
/// are the operand widths; Bool results are 0/1. Division follows SMT-LIB.
Word apply_op(Op op, std::span<const Word> args, std::span<const unsigned> arg_widths,
    std::array<unsigned, 2> params);

/// Evaluates a BitVec or Bool expression. Arrays may appear inside.
Word evaluate(const Expr& e, const Assignment& assignment);

}  // namespace symx::smt
