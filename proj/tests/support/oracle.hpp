// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference semantics for small bit-vectors, written against the SMT-LIB
// definitions rather than the library evaluator. Widths up to 64 bits.

#include "symx/smt/expr.hpp"

#include <cstdint>
#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace oracle
{
using u64 = std::uint64_t;

inline u64 mask(unsigned w)
{
    return w >= 64 ? ~u64{0} : (u64{1} << w) - 1;
}

inline bool msb(u64 v, unsigned w)
{
    return (v >> (w - 1)) & 1;
}

inline u64 neg(u64 v, unsigned w)
{
    return (~v + 1) & mask(w);
}

inline std::int64_t as_signed(u64 v, unsigned w)
{
    if (w < 64 && msb(v, w))
        return static_cast<std::int64_t>(v | ~mask(w));
    return static_cast<std::int64_t>(v);
}

inline u64 udiv(u64 a, u64 b, unsigned w)
{
    return b == 0 ? mask(w) : a / b;
}

inline u64 urem(u64 a, u64 b)
{
    return b == 0 ? a : a % b;
}

// bvsdiv / bvsrem exactly as the SMT-LIB FixedSizeBitVectors theory defines them.
inline u64 sdiv(u64 s, u64 t, unsigned w)
{
    const bool ms = msb(s, w);
    const bool mt = msb(t, w);
    if (!ms && !mt)
        return udiv(s, t, w);
    if (ms && !mt)
        return neg(udiv(neg(s, w), t, w), w);
    if (!ms && mt)
        return neg(udiv(s, neg(t, w), w), w);
    return udiv(neg(s, w), neg(t, w), w);
}

inline u64 srem(u64 s, u64 t, unsigned w)
{
    const bool ms = msb(s, w);
    const bool mt = msb(t, w);
    if (!ms && !mt)
        return urem(s, t);
    if (ms && !mt)
        return neg(urem(neg(s, w), t), w);
    if (!ms && mt)
        return urem(s, neg(t, w));
    return neg(urem(neg(s, w), neg(t, w)), w);
}

struct Shape
{
    symx::smt::Op op;
    unsigned w0;  // width of the first operand (1 for Bool)
    unsigned w1;  // width of the second operand
    unsigned width;  // result width
    unsigned hi;
    unsigned lo;
};

inline Shape shape_of(const symx::smt::Expr& e)
{
    auto w = [](const symx::smt::Expr& x) { return x.sort().is_bool() ? 1u : x.width(); };
    const auto& xs = e.operands();
    return Shape{e.op(), w(xs[0]), xs.size() > 1 ? w(xs[1]) : 0, w(e), e.param(0), e.param(1)};
}

inline u64 apply(const Shape& s, u64 a, u64 b, u64 c)
{
    using symx::smt::Op;
    const unsigned w = s.w0;
    const u64 m = mask(w);
    switch (s.op)
    {
    case Op::BvAdd: return (a + b) & m;
    case Op::BvSub: return (a - b) & m;
    case Op::BvMul: return (a * b) & m;
    case Op::BvUdiv: return udiv(a, b, w);
    case Op::BvSdiv: return sdiv(a, b, w);
    case Op::BvUrem: return urem(a, b);
    case Op::BvSrem: return srem(a, b, w);
    case Op::BvAnd: return a & b;
    case Op::BvOr: return a | b;
    case Op::BvXor: return a ^ b;
    case Op::BvNot: return ~a & m;
    case Op::BvNeg: return neg(a, w);
    case Op::BvShl: return b >= w ? 0 : (a << b) & m;
    case Op::BvLshr: return b >= w ? 0 : a >> b;
    case Op::BvAshr:
        if (b >= w)
            return msb(a, w) ? m : 0;
        return static_cast<u64>(as_signed(a, w) >> b) & m;
    case Op::BvUlt: return a < b;
    case Op::BvUle: return a <= b;
    case Op::BvSlt: return as_signed(a, w) < as_signed(b, w);
    case Op::BvSle: return as_signed(a, w) <= as_signed(b, w);
    case Op::Eq: return a == b;
    case Op::Not: return a ^ 1;
    case Op::And: return a & b;
    case Op::Or: return a | b;
    case Op::Ite: return a ? b : c;
    case Op::Concat: return (a << s.w1) | b;
    case Op::Extract: return (a >> s.lo) & mask(s.hi - s.lo + 1);
    case Op::ZeroExtend: return a;
    case Op::SignExtend: return static_cast<u64>(as_signed(a, w)) & mask(s.width);
    case Op::Select:
    case Op::Store: break;
    }
    throw std::logic_error("oracle: unsupported operation");
}

using Env = std::map<std::string, u64>;

/// Flattened term for brute-force loops; variables are bound by position.
class Program
{
public:
    Program(const symx::smt::Expr& root, std::vector<std::string> vars) : vars_{std::move(vars)}
    {
        index(root);
    }

    u64 operator()(const std::vector<u64>& values)
    {
        slots_.resize(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i)
        {
            const Node& n = nodes_[i];
            switch (n.kind)
            {
            case Kind::Var:
                slots_[i] = values[n.var] & mask(n.shape.width);
                break;
            case Kind::Const:
                slots_[i] = n.constant;
                break;
            case Kind::Op:
                slots_[i] = apply(n.shape, slots_[n.args[0]], n.args[1] ? slots_[n.args[1]] : 0,
                    n.args[2] ? slots_[n.args[2]] : 0);
                break;
            }
        }
        return slots_.back();
    }

private:
    enum class Kind
    {
        Var,
        Const,
        Op
    };

    struct Node
    {
        Kind kind = Kind::Const;
        Shape shape{};
        std::size_t args[3]{};  // 0 means "absent" for the second and third slot
        std::size_t var = 0;
        u64 constant = 0;
    };

    std::size_t index(const symx::smt::Expr& e)
    {
        if (auto it = ids_.find(e.id()); it != ids_.end())
            return it->second;
        if (e.sort().is_array())
            throw std::logic_error("oracle: arrays unsupported");
        Node n;
        if (e.is_operation())
        {
            n.kind = Kind::Op;
            n.shape = shape_of(e);
            std::size_t k = 0;
            for (const auto& o : e.operands())
                n.args[k++] = index(o);
        }
        else if (e.is_variable())
        {
            n.kind = Kind::Var;
            n.shape.width = e.sort().is_bool() ? 1 : e.width();
            auto it = std::find(vars_.begin(), vars_.end(), e.name());
            if (it == vars_.end())
                throw std::logic_error("oracle: unknown variable " + e.name());
            n.var = static_cast<std::size_t>(it - vars_.begin());
        }
        else
            n.constant = static_cast<u64>(e.value());
        // Slot 0 is reserved so that 0 can mark an absent operand.
        if (nodes_.empty())
            nodes_.push_back(Node{});
        nodes_.push_back(n);
        ids_.emplace(e.id(), nodes_.size() - 1);
        return nodes_.size() - 1;
    }

    std::vector<std::string> vars_;
    std::vector<Node> nodes_;
    std::unordered_map<const void*, std::size_t> ids_;
    std::vector<u64> slots_;
};

/// One-off evaluation with named variables (missing names are 0).
inline u64 eval(const symx::smt::Expr& e, const Env& env)
{
    std::vector<std::string> names;
    std::vector<u64> values;
    for (const auto& [name, sort] : symx::smt::variables_of(e))
    {
        names.push_back(name);
        auto it = env.find(name);
        values.push_back(it == env.end() ? 0 : it->second);
    }
    Program p{e, names};
    return p(values);
}

}  // namespace oracle
