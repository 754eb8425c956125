// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/smt/simplify.hpp"

#include "symx/smt/eval.hpp"

#include <unordered_map>

namespace symx::smt
{
namespace
{
bool is_commutative(Op op)
{
    switch (op)
    {
    case Op::BvAdd:
    case Op::BvMul:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
    case Op::Eq:
    case Op::And:
    case Op::Or:
        return true;
    default:
        return false;
    }
}

bool is_const_value(const Expr& e, const Word& v)
{
    return e.is_constant() && !e.sort().is_array() && e.value() == v;
}

bool all_scalar_constants(const std::vector<Expr>& xs)
{
    for (const auto& x : xs)
        if (!x.is_constant() || x.sort().is_array())
            return false;
    return true;
}

Expr fold(Op op, const std::vector<Expr>& xs, const std::array<unsigned, 2>& params, const Sort& result)
{
    std::array<Word, 3> args{};
    std::array<unsigned, 3> widths{};
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        args[i] = xs[i].value();
        widths[i] = xs[i].width();
    }
    const Word v = apply_op(op, std::span(args.data(), xs.size()), std::span(widths.data(), xs.size()), params);
    if (result.is_bool())
        return Expr::boolean(v != 0);
    return Expr::constant(v, result.width());
}

/// Index of the lowest set bit when `v` is a contiguous low mask 0..01..1, else 0.
unsigned low_mask_length(const Word& v, unsigned width)
{
    if (v == 0)
        return 0;
    for (unsigned k = 1; k < width; ++k)
        if (v == low_mask(k))
            return k;
    return 0;
}

Expr rewrite_select(const Expr& array, const Expr& index)
{
    Expr a = array;
    for (;;)
    {
        if (a.is_constant())
            return Expr::constant(a.value(), a.sort().value_width());
        if (!a.is_op(Op::Store))
            break;
        const Expr& j = a.operand(1);
        if (j == index)
            return a.operand(2);
        if (j.is_constant() && index.is_constant())
        {
            a = a.operand(0);
            continue;
        }
        break;
    }
    return Expr::raw(Op::Select, {a, index});
}
}  // namespace

Expr rewrite(Op op, std::vector<Expr> xs, std::array<unsigned, 2> params)
{
    if (is_commutative(op) && xs[0].is_constant() && !xs[1].is_constant())
        std::swap(xs[0], xs[1]);

    if (op != Op::Select && op != Op::Store && op != Op::Ite && all_scalar_constants(xs))
    {
        const Expr shape = Expr::raw(op, xs, params);
        return fold(op, xs, params, shape.sort());
    }

    const unsigned w = xs[0].sort().is_bitvec() ? xs[0].width() : 1;
    auto zero = [&] { return Expr::constant(0, w); };

    switch (op)
    {
    case Op::BvAdd:
        if (is_const_value(xs[1], 0))
            return xs[0];
        if (xs[1].is_constant() && xs[0].is_op(Op::BvAdd) && xs[0].operand(1).is_constant())
            return add(xs[0].operand(0), bv(xs[0].operand(1).value() + xs[1].value(), w));
        break;
    case Op::BvSub:
        if (is_const_value(xs[1], 0))
            return xs[0];
        if (xs[0] == xs[1])
            return zero();
        break;
    case Op::BvMul:
        if (is_const_value(xs[1], 0))
            return zero();
        if (is_const_value(xs[1], 1))
            return xs[0];
        break;
    case Op::BvUdiv:
        if (is_const_value(xs[1], 1))
            return xs[0];
        break;
    case Op::BvUrem:
        if (is_const_value(xs[1], 1))
            return zero();
        break;
    case Op::BvAnd:
        if (is_const_value(xs[1], 0))
            return zero();
        if (is_const_value(xs[1], low_mask(w)) || xs[0] == xs[1])
            return xs[0];
        if (xs[1].is_constant())
        {
            if (unsigned k = low_mask_length(xs[1].value(), w); k > 0)
                return zext(w - k, extract(k - 1, 0, xs[0]));
        }
        break;
    case Op::BvOr:
        if (is_const_value(xs[1], 0) || xs[0] == xs[1])
            return xs[0];
        if (is_const_value(xs[1], low_mask(w)))
            return xs[1];
        break;
    case Op::BvXor:
        if (is_const_value(xs[1], 0))
            return xs[0];
        if (xs[0] == xs[1])
            return zero();
        break;
    case Op::BvNot:
        if (xs[0].is_op(Op::BvNot))
            return xs[0].operand(0);
        break;
    case Op::BvNeg:
        if (xs[0].is_op(Op::BvNeg))
            return xs[0].operand(0);
        break;
    case Op::BvShl:
    case Op::BvLshr:
        if (is_const_value(xs[1], 0))
            return xs[0];
        if (xs[1].is_constant())
        {
            if (xs[1].value() >= w)
                return zero();
            const auto k = static_cast<unsigned>(xs[1].value());
            if (op == Op::BvLshr)
                return zext(k, extract(w - 1, k, xs[0]));
            return concat(extract(w - 1 - k, 0, xs[0]), Expr::constant(0, k));
        }
        break;
    case Op::BvAshr:
        if (is_const_value(xs[1], 0))
            return xs[0];
        break;
    case Op::BvUlt:
        if (xs[0] == xs[1] || is_const_value(xs[1], 0))
            return Expr::boolean(false);
        break;
    case Op::BvUle:
        if (xs[0] == xs[1] || is_const_value(xs[0], 0))
            return Expr::boolean(true);
        break;
    case Op::BvSlt:
        if (xs[0] == xs[1])
            return Expr::boolean(false);
        break;
    case Op::BvSle:
        if (xs[0] == xs[1])
            return Expr::boolean(true);
        break;
    case Op::Eq: {
        if (xs[0] == xs[1])
            return Expr::boolean(true);
        if (xs[0].sort().is_bool() && xs[1].is_constant())
            return xs[1].is_true() ? xs[0] : lnot(xs[0]);
        if (!xs[1].is_constant() || xs[1].sort().is_array())
            break;
        const Expr& lhs = xs[0];
        const Word& k = xs[1].value();
        if (lhs.is_op(Op::Ite) && lhs.operand(1).is_constant() && lhs.operand(2).is_constant())
        {
            const bool t = lhs.operand(1).value() == k;
            const bool f = lhs.operand(2).value() == k;
            if (t && f)
                return Expr::boolean(true);
            if (!t && !f)
                return Expr::boolean(false);
            return t ? lhs.operand(0) : lnot(lhs.operand(0));
        }
        if (lhs.is_op(Op::ZeroExtend))
        {
            const Expr& inner = lhs.operand(0);
            if ((k >> inner.width()) != 0)
                return Expr::boolean(false);
            return eq(inner, Expr::constant(k, inner.width()));
        }
        if (lhs.is_op(Op::BvXor) && lhs.operand(1).is_constant())
            return eq(lhs.operand(0), Expr::constant(k ^ lhs.operand(1).value(), w));
        if (lhs.is_op(Op::BvAdd) && lhs.operand(1).is_constant())
            return eq(lhs.operand(0), bv(k - lhs.operand(1).value(), w));
        break;
    }
    case Op::Not:
        if (xs[0].is_op(Op::Not))
            return xs[0].operand(0);
        break;
    case Op::And:
        if (xs[1].is_false())
            return xs[1];
        if (xs[1].is_true() || xs[0] == xs[1])
            return xs[0];
        break;
    case Op::Or:
        if (xs[1].is_true())
            return xs[1];
        if (xs[1].is_false() || xs[0] == xs[1])
            return xs[0];
        break;
    case Op::Ite:
        if (xs[0].is_true())
            return xs[1];
        if (xs[0].is_false())
            return xs[2];
        if (xs[1] == xs[2])
            return xs[1];
        if (xs[1].sort().is_bool() && xs[1].is_constant() && xs[2].is_constant())
            return xs[1].is_true() ? xs[0] : lnot(xs[0]);
        if (xs[0].is_op(Op::Not))
            return ite(xs[0].operand(0), xs[2], xs[1]);
        break;
    case Op::Concat: {
        const Expr& hi = xs[0];
        const Expr& lo = xs[1];
        if (is_const_value(hi, 0))
            return zext(hi.width(), lo);
        if (hi.is_op(Op::Extract) && lo.is_op(Op::Extract) && hi.operand(0) == lo.operand(0)
            && hi.param(1) == lo.param(0) + 1)
            return extract(hi.param(0), lo.param(1), hi.operand(0));
        if (hi.is_op(Op::Extract) && lo.is_op(Op::Concat) && lo.operand(0).is_op(Op::Extract)
            && hi.operand(0) == lo.operand(0).operand(0) && hi.param(1) == lo.operand(0).param(0) + 1)
            return concat(extract(hi.param(0), lo.operand(0).param(1), hi.operand(0)), lo.operand(1));
        break;
    }
    case Op::Extract: {
        const unsigned hi = params[0];
        const unsigned lo = params[1];
        const Expr& x = xs[0];
        if (lo == 0 && hi + 1 == x.width())
            return x;
        if (x.is_op(Op::Extract))
            return extract(hi + x.param(1), lo + x.param(1), x.operand(0));
        if (x.is_op(Op::Concat))
        {
            const unsigned wl = x.operand(1).width();
            if (hi < wl)
                return extract(hi, lo, x.operand(1));
            if (lo >= wl)
                return extract(hi - wl, lo - wl, x.operand(0));
            return concat(extract(hi - wl, 0, x.operand(0)), extract(wl - 1, lo, x.operand(1)));
        }
        if (x.is_op(Op::ZeroExtend))
        {
            const Expr& inner = x.operand(0);
            const unsigned wi = inner.width();
            if (hi < wi)
                return extract(hi, lo, inner);
            if (lo >= wi)
                return Expr::constant(0, hi - lo + 1);
            return zext(hi - wi + 1, extract(wi - 1, lo, inner));
        }
        if (x.is_op(Op::Ite) && x.operand(1).is_constant() && x.operand(2).is_constant())
            return ite(x.operand(0), extract(hi, lo, x.operand(1)), extract(hi, lo, x.operand(2)));
        break;
    }
    case Op::ZeroExtend:
        if (params[0] == 0)
            return xs[0];
        if (xs[0].is_op(Op::ZeroExtend))
            return zext(params[0] + xs[0].param(0), xs[0].operand(0));
        break;
    case Op::SignExtend:
        if (params[0] == 0)
            return xs[0];
        break;
    case Op::Select:
        return rewrite_select(xs[0], xs[1]);
    case Op::Store:
        if (xs[0].is_op(Op::Store) && xs[0].operand(1) == xs[1])
            return store(xs[0].operand(0), xs[1], xs[2]);
        break;
    case Op::BvSdiv:
    case Op::BvSrem:
        break;
    }
    return Expr::raw(op, std::move(xs), params);
}

Expr simplify(const Expr& e)
{
    std::unordered_map<const Node*, Expr> memo;
    // Iterative post-order so deep STORE chains do not exhaust the stack.
    std::vector<std::pair<Expr, bool>> work{{e, false}};
    while (!work.empty())
    {
        auto [x, expanded] = work.back();
        work.pop_back();
        if (memo.contains(x.id()))
            continue;
        if (!x.is_operation())
        {
            memo.emplace(x.id(), x);
            continue;
        }
        if (!expanded)
        {
            work.emplace_back(x, true);
            for (const auto& o : x.operands())
                if (!memo.contains(o.id()))
                    work.emplace_back(o, false);
            continue;
        }
        std::vector<Expr> ops;
        ops.reserve(x.operands().size());
        bool changed = false;
        for (const auto& o : x.operands())
        {
            const Expr& s = memo.at(o.id());
            changed = changed || s.id() != o.id();
            ops.push_back(s);
        }
        Expr r = rewrite(x.op(), std::move(ops), {x.param(0), x.param(1)});
        if (!changed && r == x)
            r = x;
        memo.emplace(x.id(), std::move(r));
    }
    return memo.at(e.id());
}

}  // namespace symx::smt
