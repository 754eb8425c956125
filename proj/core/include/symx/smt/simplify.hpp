// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/expr.hpp"

namespace symx::smt
{
/// Returns an expression equivalent to `e` under every model. Rebuilds the
/// DAG bottom-up through the same local rules make_operation applies, so the
/// result of simplify() on an already simplified term is the term itself.
Expr simplify(const Expr& e);

/// One local rewriting step for an operator applied to simplified operands.
/// Operands must already be sort-correct.
Expr rewrite(Op op, std::vector<Expr> operands, std::array<unsigned, 2> params);

}  // namespace symx::smt
