// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/constraints.hpp"
#include "symx/smt/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace symx::smt
{
inline constexpr std::string_view kDefaultLogic = "QF_AUFBV";

/// Minimal S-expression tree for SMT-LIB text.
struct SExpr
{
    std::variant<std::string, std::vector<SExpr>> data;

    bool is_atom() const noexcept { return data.index() == 0; }
    const std::string& atom() const { return std::get<std::string>(data); }
    const std::vector<SExpr>& list() const { return std::get<std::vector<SExpr>>(data); }
    bool is_atom(std::string_view s) const { return is_atom() && atom() == s; }
};

/// Parses every top-level S-expression in `text`. Throws ParseError.
std::vector<SExpr> parse_sexprs(std::string_view text);

/// Constant literal as SMT-LIB text (#x.., #b.., true/false, const array).
std::string literal_to_smtlib(const Expr& constant);

/// Term text; subterms shared inside the DAG are bound with `let`.
std::string term_to_smtlib(const Expr& e);

std::string declaration_to_smtlib(const std::string& name, const Sort& sort);

/// Complete script: set-logic, sorted declare-funs, one assert per assertion
/// (plus `extra`), check-sat. Pure function of its arguments.
std::string to_smtlib(const ConstraintSet& cs, const std::optional<Expr>& extra = std::nullopt,
    std::string_view logic = kDefaultLogic);

/// Variable environment used while parsing terms.
using Declarations = std::map<std::string, Sort>;

/// Parses a term under the given declarations, without rewriting.
Expr parse_term(const SExpr& s, const Declarations& decls);

/// Parses a BitVec/Bool value literal (#x.., #b.., (_ bvN w), true, false).
Word parse_value(const SExpr& s);

/// Rebuilds a ConstraintSet from a script produced by to_smtlib.
ConstraintSet parse_script(std::string_view text);

}  // namespace symx::smt
