// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/smt/eval.hpp"

#include "symx/error.hpp"

#include <unordered_map>

namespace symx::smt
{
namespace
{
Word udiv_smt(const Word& a, const Word& b, unsigned w)
{
    return b == 0 ? low_mask(w) : Word(a / b);
}

Word urem_smt(const Word& a, const Word& b)
{
    return b == 0 ? a : Word(a % b);
}

Word sdiv_smt(const Word& a, const Word& b, unsigned w)
{
    const bool na = sign_bit(a, w);
    const bool nb = sign_bit(b, w);
    const Word ua = na ? negate(a, w) : a;
    const Word ub = nb ? negate(b, w) : b;
    const Word q = udiv_smt(ua, ub, w);
    return na != nb ? negate(q, w) : q;
}

Word srem_smt(const Word& a, const Word& b, unsigned w)
{
    const bool na = sign_bit(a, w);
    const bool nb = sign_bit(b, w);
    const Word ua = na ? negate(a, w) : a;
    const Word ub = nb ? negate(b, w) : b;
    const Word r = urem_smt(ua, ub);
    return na ? negate(r, w) : r;
}

bool slt_value(const Word& a, const Word& b, unsigned w)
{
    const bool na = sign_bit(a, w);
    const bool nb = sign_bit(b, w);
    if (na != nb)
        return na;
    return a < b;
}

/// Concrete array: default element plus explicit entries.
struct ArrayValue
{
    Word fallback;
    std::map<Word, Word> entries;

    Word at(const Word& i) const
    {
        auto it = entries.find(i);
        return it == entries.end() ? fallback : it->second;
    }
};

class Evaluator
{
public:
    explicit Evaluator(const Assignment& a) : assignment_{a} {}

    Word scalar(const Expr& e)
    {
        if (auto it = scalars_.find(e.id()); it != scalars_.end())
            return it->second;
        Word v = compute(e);
        scalars_.emplace(e.id(), v);
        return v;
    }

    const ArrayValue& array(const Expr& e)
    {
        if (auto it = arrays_.find(e.id()); it != arrays_.end())
            return it->second;
        ArrayValue v;
        if (e.is_constant())
            v.fallback = e.value();
        else if (e.is_variable())
            v.fallback = 0;
        else if (e.is_op(Op::Store))
        {
            v = array(e.operand(0));
            v.entries[scalar(e.operand(1))] = scalar(e.operand(2));
        }
        else if (e.is_op(Op::Ite))
            v = scalar(e.operand(0)) != 0 ? array(e.operand(1)) : array(e.operand(2));
        else
            throw Error("cannot evaluate array expression");
        return arrays_.emplace(e.id(), std::move(v)).first->second;
    }

private:
    Word compute(const Expr& e)
    {
        if (e.is_constant())
            return e.value();
        if (e.is_variable())
        {
            auto it = assignment_.find(e.name());
            return it == assignment_.end() ? Word(0) : truncate(it->second, e.width());
        }
        const Op op = e.op();
        if (op == Op::Select)
            return array(e.operand(0)).at(scalar(e.operand(1)));
        if (op == Op::Ite)
            return scalar(e.operand(0)) != 0 ? scalar(e.operand(1)) : scalar(e.operand(2));
        if (op == Op::Eq && e.operand(0).sort().is_array())
            throw Error("array equality is not evaluable");
        std::array<Word, 3> args{};
        std::array<unsigned, 3> widths{};
        const auto ops = e.operands();
        for (std::size_t i = 0; i < ops.size(); ++i)
        {
            args[i] = scalar(ops[i]);
            widths[i] = ops[i].width();
        }
        return apply_op(op, std::span(args.data(), ops.size()), std::span(widths.data(), ops.size()),
            {e.param(0), e.param(1)});
    }

    const Assignment& assignment_;
    std::unordered_map<const Node*, Word> scalars_;
    std::unordered_map<const Node*, ArrayValue> arrays_;
};
}  // namespace

Word apply_op(Op op, std::span<const Word> a, std::span<const unsigned> widths, std::array<unsigned, 2> params)
{
    const unsigned w = widths.empty() ? 1 : widths[0];
    switch (op)
    {
    case Op::BvAdd:
        return truncate(a[0] + a[1], w);
    case Op::BvSub:
        return truncate(a[0] - a[1], w);
    case Op::BvMul:
        return truncate(a[0] * a[1], w);
    case Op::BvUdiv:
        return udiv_smt(a[0], a[1], w);
    case Op::BvSdiv:
        return sdiv_smt(a[0], a[1], w);
    case Op::BvUrem:
        return urem_smt(a[0], a[1]);
    case Op::BvSrem:
        return srem_smt(a[0], a[1], w);
    case Op::BvAnd:
        return a[0] & a[1];
    case Op::BvOr:
        return a[0] | a[1];
    case Op::BvXor:
        return a[0] ^ a[1];
    case Op::BvNot:
        return truncate(~a[0], w);
    case Op::BvNeg:
        return negate(a[0], w);
    case Op::BvShl:
        return a[1] >= w ? Word(0) : truncate(a[0] << static_cast<unsigned>(a[1]), w);
    case Op::BvLshr:
        return a[1] >= w ? Word(0) : Word(a[0] >> static_cast<unsigned>(a[1]));
    case Op::BvAshr: {
        const bool negative = sign_bit(a[0], w);
        if (a[1] >= w)
            return negative ? low_mask(w) : Word(0);
        const auto s = static_cast<unsigned>(a[1]);
        Word r = a[0] >> s;
        if (negative && s > 0)
            r |= low_mask(w) ^ (s == w ? Word(0) : low_mask(w - s));
        return r;
    }
    case Op::BvUlt:
        return a[0] < a[1] ? 1 : 0;
    case Op::BvUle:
        return a[0] <= a[1] ? 1 : 0;
    case Op::BvSlt:
        return slt_value(a[0], a[1], w) ? 1 : 0;
    case Op::BvSle:
        return (a[0] == a[1] || slt_value(a[0], a[1], w)) ? 1 : 0;
    case Op::Eq:
        return a[0] == a[1] ? 1 : 0;
    case Op::Not:
        return a[0] == 0 ? 1 : 0;
    case Op::And:
        return (a[0] != 0 && a[1] != 0) ? 1 : 0;
    case Op::Or:
        return (a[0] != 0 || a[1] != 0) ? 1 : 0;
    case Op::Ite:
        return a[0] != 0 ? a[1] : a[2];
    case Op::Concat:
        return (a[0] << widths[1]) | a[1];
    case Op::Extract:
        return truncate(a[0] >> params[1], params[0] - params[1] + 1);
    case Op::ZeroExtend:
        return a[0];
    case Op::SignExtend:
        if (params[0] == 0 || !sign_bit(a[0], w))
            return a[0];
        return a[0] | (low_mask(w + params[0]) ^ low_mask(w));
    case Op::Select:
    case Op::Store:
        break;
    }
    throw Error("apply_op: operator " + std::string(op_name(op)) + " is not scalar");
}

Word evaluate(const Expr& e, const Assignment& assignment)
{
    if (e.sort().is_array())
        throw Error("evaluate: array-sorted expression");
    Evaluator ev{assignment};
    return ev.scalar(e);
}

}  // namespace symx::smt
