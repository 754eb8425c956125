// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/word.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symx::smt
{
class Sort
{
public:
    enum class Kind : std::uint8_t
    {
        Bool,
        BitVec,
        Array
    };

    static Sort boolean() { return Sort{Kind::Bool, 1, 0}; }
    static Sort bitvec(unsigned width);
    static Sort array(unsigned index_width, unsigned value_width);

    Kind kind() const noexcept { return kind_; }
    bool is_bool() const noexcept { return kind_ == Kind::Bool; }
    bool is_bitvec() const noexcept { return kind_ == Kind::BitVec; }
    bool is_array() const noexcept { return kind_ == Kind::Array; }

    /// Bit width of a BitVec (1 for Bool).
    unsigned width() const noexcept { return first_; }
    unsigned index_width() const noexcept { return first_; }
    unsigned value_width() const noexcept { return second_; }

    std::string to_smtlib() const;

    friend bool operator==(const Sort&, const Sort&) = default;

private:
    Sort(Kind k, unsigned a, unsigned b) : kind_{k}, first_{static_cast<std::uint16_t>(a)}, second_{static_cast<std::uint16_t>(b)} {}

    Kind kind_;
    std::uint16_t first_;
    std::uint16_t second_;
};

/// Closed set of operation kinds.
enum class Op : std::uint8_t
{
    BvAdd,
    BvSub,
    BvMul,
    BvUdiv,
    BvSdiv,
    BvUrem,
    BvSrem,
    BvAnd,
    BvOr,
    BvXor,
    BvNot,
    BvNeg,
    BvShl,
    BvLshr,
    BvAshr,
    BvUlt,
    BvUle,
    BvSlt,
    BvSle,
    Eq,
    Not,
    And,
    Or,
    Ite,
    Concat,
    Extract,
    ZeroExtend,
    SignExtend,
    Select,
    Store,
};

inline constexpr std::size_t kOpCount = static_cast<std::size_t>(Op::Store) + 1;

/// SMT-LIB spelling of the operator head ("bvadd", "extract", ...).
std::string_view op_name(Op op);

struct Node;

/// Immutable, shareable symbolic term. A default-constructed Expr is null.
class Expr
{
public:
    enum class Kind : std::uint8_t
    {
        Constant,
        Variable,
        Operation
    };

    Expr() = default;

    /// BitVec constant; throws SortError unless value < 2^width.
    static Expr constant(const Word& value, unsigned width);
    static Expr boolean(bool value);
    /// Array whose every element is `element`.
    static Expr const_array(const Sort& array_sort, const Word& element);
    static Expr variable(std::string name, const Sort& sort);

    /// Sort-checked construction without any rewriting.
    static Expr raw(Op op, std::vector<Expr> operands, std::array<unsigned, 2> params = {});

    explicit operator bool() const noexcept { return node_ != nullptr; }

    Kind kind() const noexcept;
    const Sort& sort() const noexcept;
    unsigned width() const noexcept { return sort().width(); }

    bool is_constant() const noexcept { return kind() == Kind::Constant; }
    bool is_variable() const noexcept { return kind() == Kind::Variable; }
    bool is_operation() const noexcept { return kind() == Kind::Operation; }
    bool is_op(Op op) const noexcept;

    /// Constant payload (BitVec value, 0/1 for Bool, element for const arrays).
    const Word& value() const;
    bool is_true() const noexcept;
    bool is_false() const noexcept;

    const std::string& name() const;
    Op op() const;
    std::span<const Expr> operands() const;
    const Expr& operand(std::size_t i) const;
    /// EXTRACT: {hi, lo}; ZEXT/SEXT: {n, 0}.
    unsigned param(std::size_t i) const;

    std::size_t hash() const noexcept;
    const Node* id() const noexcept { return node_.get(); }

    /// Structural equality.
    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_{std::move(n)} {}
    friend struct Node;

    std::shared_ptr<const Node> node_;
};

struct Node
{
    Sort sort;
    Expr::Kind kind;
    Op op{};
    std::array<unsigned, 2> params{};
    Word value{};
    std::string name{};
    std::vector<Expr> operands{};
    std::size_t hash = 0;

    static Expr make(Node n);
};

struct ExprHash
{
    std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

/// make_constant from the public API: BitVec(width) constant.
Expr make_constant(const Word& value, unsigned width);

/// Sort-checked construction followed by local rewriting (constant folding etc.).
Expr make_operation(Op op, std::vector<Expr> operands, std::array<unsigned, 2> params = {});

// Builders. All of them go through make_operation.
Expr bv(const Word& value, unsigned width);
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr udiv(const Expr& a, const Expr& b);
Expr sdiv(const Expr& a, const Expr& b);
Expr urem(const Expr& a, const Expr& b);
Expr srem(const Expr& a, const Expr& b);
Expr bvand(const Expr& a, const Expr& b);
Expr bvor(const Expr& a, const Expr& b);
Expr bvxor(const Expr& a, const Expr& b);
Expr bvnot(const Expr& a);
Expr neg(const Expr& a);
Expr shl(const Expr& a, const Expr& b);
Expr lshr(const Expr& a, const Expr& b);
Expr ashr(const Expr& a, const Expr& b);
Expr ult(const Expr& a, const Expr& b);
Expr ule(const Expr& a, const Expr& b);
Expr slt(const Expr& a, const Expr& b);
Expr sle(const Expr& a, const Expr& b);
Expr ugt(const Expr& a, const Expr& b);
Expr uge(const Expr& a, const Expr& b);
Expr eq(const Expr& a, const Expr& b);
Expr ne(const Expr& a, const Expr& b);
Expr lnot(const Expr& a);
Expr land(const Expr& a, const Expr& b);
Expr lor(const Expr& a, const Expr& b);
Expr implies(const Expr& a, const Expr& b);
Expr ite(const Expr& c, const Expr& t, const Expr& f);
Expr concat(const Expr& hi, const Expr& lo);
Expr extract(unsigned hi, unsigned lo, const Expr& a);
Expr zext(unsigned extra_bits, const Expr& a);
Expr sext(unsigned extra_bits, const Expr& a);
Expr select(const Expr& array, const Expr& index);
Expr store(const Expr& array, const Expr& index, const Expr& value);

/// Bool -> BitVec(width) as ITE(b, 1, 0).
Expr bool_to_bv(const Expr& b, unsigned width);
/// Zero-extends or truncates to `width`.
Expr resize(const Expr& a, unsigned width);

/// Variables occurring in `e`, keyed by name.
void collect_variables(const Expr& e, std::map<std::string, Sort>& out);
std::map<std::string, Sort> variables_of(const Expr& e);

/// Number of distinct nodes in the DAG.
std::size_t dag_size(const Expr& e);

}  // namespace symx::smt
