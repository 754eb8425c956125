// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/smt/expr.hpp"

#include "symx/error.hpp"
#include "symx/smt/simplify.hpp"

#include <boost/container_hash/hash.hpp>

#include <unordered_set>

namespace symx::smt
{
namespace
{
constexpr std::string_view kOpNames[] = {"bvadd", "bvsub", "bvmul", "bvudiv", "bvsdiv", "bvurem",
    "bvsrem", "bvand", "bvor", "bvxor", "bvnot", "bvneg", "bvshl", "bvlshr", "bvashr", "bvult",
    "bvule", "bvslt", "bvsle", "=", "not", "and", "or", "ite", "concat", "extract", "zero_extend",
    "sign_extend", "select", "store"};
static_assert(std::size(kOpNames) == kOpCount);

[[noreturn]] void sort_error(Op op, const std::string& why)
{
    throw SortError(std::string(op_name(op)) + ": " + why);
}

void expect_arity(Op op, const std::vector<Expr>& xs, std::size_t n)
{
    if (xs.size() != n)
        sort_error(op, "expected " + std::to_string(n) + " operands, got " + std::to_string(xs.size()));
    for (const auto& x : xs)
        if (!x)
            sort_error(op, "null operand");
}

Sort result_sort(Op op, const std::vector<Expr>& xs, const std::array<unsigned, 2>& p)
{
    switch (op)
    {
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvMul:
    case Op::BvUdiv:
    case Op::BvSdiv:
    case Op::BvUrem:
    case Op::BvSrem:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
    case Op::BvShl:
    case Op::BvLshr:
    case Op::BvAshr:
        expect_arity(op, xs, 2);
        if (!xs[0].sort().is_bitvec() || xs[0].sort() != xs[1].sort())
            sort_error(op, "operands must be bitvectors of equal width");
        return xs[0].sort();
    case Op::BvNot:
    case Op::BvNeg:
        expect_arity(op, xs, 1);
        if (!xs[0].sort().is_bitvec())
            sort_error(op, "operand must be a bitvector");
        return xs[0].sort();
    case Op::BvUlt:
    case Op::BvUle:
    case Op::BvSlt:
    case Op::BvSle:
        expect_arity(op, xs, 2);
        if (!xs[0].sort().is_bitvec() || xs[0].sort() != xs[1].sort())
            sort_error(op, "operands must be bitvectors of equal width");
        return Sort::boolean();
    case Op::Eq:
        expect_arity(op, xs, 2);
        if (xs[0].sort() != xs[1].sort())
            sort_error(op, "operand sorts differ: " + xs[0].sort().to_smtlib() + " vs " + xs[1].sort().to_smtlib());
        return Sort::boolean();
    case Op::Not:
        expect_arity(op, xs, 1);
        if (!xs[0].sort().is_bool())
            sort_error(op, "operand must be Bool");
        return Sort::boolean();
    case Op::And:
    case Op::Or:
        expect_arity(op, xs, 2);
        if (!xs[0].sort().is_bool() || !xs[1].sort().is_bool())
            sort_error(op, "operands must be Bool");
        return Sort::boolean();
    case Op::Ite:
        expect_arity(op, xs, 3);
        if (!xs[0].sort().is_bool())
            sort_error(op, "condition must be Bool");
        if (xs[1].sort() != xs[2].sort())
            sort_error(op, "branches must have the same sort");
        return xs[1].sort();
    case Op::Concat:
        expect_arity(op, xs, 2);
        if (!xs[0].sort().is_bitvec() || !xs[1].sort().is_bitvec())
            sort_error(op, "operands must be bitvectors");
        return Sort::bitvec(xs[0].width() + xs[1].width());
    case Op::Extract:
        expect_arity(op, xs, 1);
        if (!xs[0].sort().is_bitvec() || p[0] < p[1] || p[0] >= xs[0].width())
            sort_error(op, "bad bit range");
        return Sort::bitvec(p[0] - p[1] + 1);
    case Op::ZeroExtend:
    case Op::SignExtend:
        expect_arity(op, xs, 1);
        if (!xs[0].sort().is_bitvec())
            sort_error(op, "operand must be a bitvector");
        return Sort::bitvec(xs[0].width() + p[0]);
    case Op::Select:
        expect_arity(op, xs, 2);
        if (!xs[0].sort().is_array() || !xs[1].sort().is_bitvec()
            || xs[1].width() != xs[0].sort().index_width())
            sort_error(op, "expected (Array i v) and BitVec(i)");
        return Sort::bitvec(xs[0].sort().value_width());
    case Op::Store:
        expect_arity(op, xs, 3);
        if (!xs[0].sort().is_array() || !xs[1].sort().is_bitvec() || !xs[2].sort().is_bitvec()
            || xs[1].width() != xs[0].sort().index_width()
            || xs[2].width() != xs[0].sort().value_width())
            sort_error(op, "expected (Array i v), BitVec(i), BitVec(v)");
        return xs[0].sort();
    }
    sort_error(op, "unknown operator");
}

bool has_params(Op op)
{
    return op == Op::Extract || op == Op::ZeroExtend || op == Op::SignExtend;
}

std::size_t hash_node(const Node& n)
{
    std::size_t h = 0;
    boost::hash_combine(h, static_cast<int>(n.kind));
    boost::hash_combine(h, static_cast<int>(n.sort.kind()));
    boost::hash_combine(h, n.sort.width());
    boost::hash_combine(h, n.sort.value_width());
    switch (n.kind)
    {
    case Expr::Kind::Constant:
        boost::hash_combine(h, to_u64(n.value));
        boost::hash_combine(h, to_u64(n.value >> 64));
        boost::hash_combine(h, to_u64(n.value >> 128));
        boost::hash_combine(h, to_u64(n.value >> 192));
        break;
    case Expr::Kind::Variable:
        boost::hash_combine(h, n.name);
        break;
    case Expr::Kind::Operation:
        boost::hash_combine(h, static_cast<int>(n.op));
        boost::hash_combine(h, n.params[0]);
        boost::hash_combine(h, n.params[1]);
        for (const auto& x : n.operands)
            boost::hash_combine(h, x.hash());
        break;
    }
    return h;
}
}  // namespace

Sort Sort::bitvec(unsigned width)
{
    if (width == 0 || width > kMaxBitWidth)
        throw SortError("bitvector width must be in [1, 256], got " + std::to_string(width));
    return Sort{Kind::BitVec, width, 0};
}

Sort Sort::array(unsigned index_width, unsigned value_width)
{
    if (index_width == 0 || index_width > kMaxBitWidth || value_width == 0 || value_width > kMaxBitWidth)
        throw SortError("array widths must be in [1, 256]");
    return Sort{Kind::Array, index_width, value_width};
}

std::string Sort::to_smtlib() const
{
    switch (kind_)
    {
    case Kind::Bool:
        return "Bool";
    case Kind::BitVec:
        return "(_ BitVec " + std::to_string(first_) + ")";
    case Kind::Array:
        return "(Array (_ BitVec " + std::to_string(first_) + ") (_ BitVec " + std::to_string(second_) + "))";
    }
    return {};
}

std::string_view op_name(Op op)
{
    return kOpNames[static_cast<std::size_t>(op)];
}

Expr Node::make(Node n)
{
    n.hash = hash_node(n);
    return Expr{std::make_shared<const Node>(std::move(n))};
}

Expr Expr::constant(const Word& value, unsigned width)
{
    const auto sort = Sort::bitvec(width);
    if (width < kMaxBitWidth && value > low_mask(width))
        throw SortError("constant " + to_hex(value) + " does not fit in " + std::to_string(width) + " bits");
    return Node::make(Node{.sort = sort, .kind = Kind::Constant, .value = value});
}

Expr Expr::boolean(bool value)
{
    static const Expr t = Node::make(Node{.sort = Sort::boolean(), .kind = Kind::Constant, .value = 1});
    static const Expr f = Node::make(Node{.sort = Sort::boolean(), .kind = Kind::Constant, .value = 0});
    return value ? t : f;
}

Expr Expr::const_array(const Sort& array_sort, const Word& element)
{
    if (!array_sort.is_array())
        throw SortError("const_array needs an array sort");
    if (array_sort.value_width() < kMaxBitWidth && element > low_mask(array_sort.value_width()))
        throw SortError("array element does not fit the value width");
    return Node::make(Node{.sort = array_sort, .kind = Kind::Constant, .value = element});
}

Expr Expr::variable(std::string name, const Sort& sort)
{
    if (name.empty())
        throw SortError("variable name must not be empty");
    return Node::make(Node{.sort = sort, .kind = Kind::Variable, .name = std::move(name)});
}

Expr Expr::raw(Op op, std::vector<Expr> operands, std::array<unsigned, 2> params)
{
    if (!has_params(op))
        params = {};
    auto sort = result_sort(op, operands, params);
    return Node::make(Node{.sort = sort, .kind = Kind::Operation, .op = op, .params = params, .operands = std::move(operands)});
}

Expr::Kind Expr::kind() const noexcept
{
    return node_->kind;
}

const Sort& Expr::sort() const noexcept
{
    return node_->sort;
}

bool Expr::is_op(Op op) const noexcept
{
    return node_ && node_->kind == Kind::Operation && node_->op == op;
}

const Word& Expr::value() const
{
    if (!is_constant())
        throw Error("value() on a non-constant expression");
    return node_->value;
}

bool Expr::is_true() const noexcept
{
    return node_ && node_->kind == Kind::Constant && node_->sort.is_bool() && node_->value != 0;
}

bool Expr::is_false() const noexcept
{
    return node_ && node_->kind == Kind::Constant && node_->sort.is_bool() && node_->value == 0;
}

const std::string& Expr::name() const
{
    if (!is_variable())
        throw Error("name() on a non-variable expression");
    return node_->name;
}

Op Expr::op() const
{
    if (!is_operation())
        throw Error("op() on a non-operation expression");
    return node_->op;
}

std::span<const Expr> Expr::operands() const
{
    return node_->operands;
}

const Expr& Expr::operand(std::size_t i) const
{
    return node_->operands.at(i);
}

unsigned Expr::param(std::size_t i) const
{
    return node_->params.at(i);
}

std::size_t Expr::hash() const noexcept
{
    return node_ ? node_->hash : 0;
}

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_)
        return true;
    if (!a.node_ || !b.node_)
        return false;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.hash != y.hash || x.kind != y.kind || x.sort != y.sort)
        return false;
    switch (x.kind)
    {
    case Expr::Kind::Constant:
        return x.value == y.value;
    case Expr::Kind::Variable:
        return x.name == y.name;
    case Expr::Kind::Operation:
        if (x.op != y.op || x.params != y.params || x.operands.size() != y.operands.size())
            return false;
        for (std::size_t i = 0; i < x.operands.size(); ++i)
            if (!(x.operands[i] == y.operands[i]))
                return false;
        return true;
    }
    return false;
}

Expr make_constant(const Word& value, unsigned width)
{
    return Expr::constant(value, width);
}

Expr make_operation(Op op, std::vector<Expr> operands, std::array<unsigned, 2> params)
{
    if (!has_params(op))
        params = {};
    (void)result_sort(op, operands, params);
    return rewrite(op, std::move(operands), params);
}

Expr bv(const Word& value, unsigned width)
{
    return Expr::constant(truncate(value, width), width);
}

Expr add(const Expr& a, const Expr& b) { return make_operation(Op::BvAdd, {a, b}); }
Expr sub(const Expr& a, const Expr& b) { return make_operation(Op::BvSub, {a, b}); }
Expr mul(const Expr& a, const Expr& b) { return make_operation(Op::BvMul, {a, b}); }
Expr udiv(const Expr& a, const Expr& b) { return make_operation(Op::BvUdiv, {a, b}); }
Expr sdiv(const Expr& a, const Expr& b) { return make_operation(Op::BvSdiv, {a, b}); }
Expr urem(const Expr& a, const Expr& b) { return make_operation(Op::BvUrem, {a, b}); }
Expr srem(const Expr& a, const Expr& b) { return make_operation(Op::BvSrem, {a, b}); }
Expr bvand(const Expr& a, const Expr& b) { return make_operation(Op::BvAnd, {a, b}); }
Expr bvor(const Expr& a, const Expr& b) { return make_operation(Op::BvOr, {a, b}); }
Expr bvxor(const Expr& a, const Expr& b) { return make_operation(Op::BvXor, {a, b}); }
Expr bvnot(const Expr& a) { return make_operation(Op::BvNot, {a}); }
Expr neg(const Expr& a) { return make_operation(Op::BvNeg, {a}); }
Expr shl(const Expr& a, const Expr& b) { return make_operation(Op::BvShl, {a, b}); }
Expr lshr(const Expr& a, const Expr& b) { return make_operation(Op::BvLshr, {a, b}); }
Expr ashr(const Expr& a, const Expr& b) { return make_operation(Op::BvAshr, {a, b}); }
Expr ult(const Expr& a, const Expr& b) { return make_operation(Op::BvUlt, {a, b}); }
Expr ule(const Expr& a, const Expr& b) { return make_operation(Op::BvUle, {a, b}); }
Expr slt(const Expr& a, const Expr& b) { return make_operation(Op::BvSlt, {a, b}); }
Expr sle(const Expr& a, const Expr& b) { return make_operation(Op::BvSle, {a, b}); }
Expr ugt(const Expr& a, const Expr& b) { return ult(b, a); }
Expr uge(const Expr& a, const Expr& b) { return ule(b, a); }
Expr eq(const Expr& a, const Expr& b) { return make_operation(Op::Eq, {a, b}); }
Expr ne(const Expr& a, const Expr& b) { return lnot(eq(a, b)); }
Expr lnot(const Expr& a) { return make_operation(Op::Not, {a}); }
Expr land(const Expr& a, const Expr& b) { return make_operation(Op::And, {a, b}); }
Expr lor(const Expr& a, const Expr& b) { return make_operation(Op::Or, {a, b}); }
Expr implies(const Expr& a, const Expr& b) { return lor(lnot(a), b); }
Expr ite(const Expr& c, const Expr& t, const Expr& f) { return make_operation(Op::Ite, {c, t, f}); }
Expr concat(const Expr& hi, const Expr& lo) { return make_operation(Op::Concat, {hi, lo}); }
Expr extract(unsigned hi, unsigned lo, const Expr& a) { return make_operation(Op::Extract, {a}, {hi, lo}); }
Expr zext(unsigned extra_bits, const Expr& a) { return make_operation(Op::ZeroExtend, {a}, {extra_bits, 0}); }
Expr sext(unsigned extra_bits, const Expr& a) { return make_operation(Op::SignExtend, {a}, {extra_bits, 0}); }
Expr select(const Expr& array, const Expr& index) { return make_operation(Op::Select, {array, index}); }
Expr store(const Expr& array, const Expr& index, const Expr& value) { return make_operation(Op::Store, {array, index, value}); }

Expr bool_to_bv(const Expr& b, unsigned width)
{
    return ite(b, bv(1, width), bv(0, width));
}

Expr resize(const Expr& a, unsigned width)
{
    if (a.width() == width)
        return a;
    if (a.width() < width)
        return zext(width - a.width(), a);
    return extract(width - 1, 0, a);
}

void collect_variables(const Expr& e, std::map<std::string, Sort>& out)
{
    std::unordered_set<const Node*> seen;
    std::vector<const Expr*> work{&e};
    while (!work.empty())
    {
        const Expr* x = work.back();
        work.pop_back();
        if (!seen.insert(x->id()).second)
            continue;
        if (x->is_variable())
            out.emplace(x->name(), x->sort());
        else if (x->is_operation())
            for (const auto& o : x->operands())
                work.push_back(&o);
    }
}

std::map<std::string, Sort> variables_of(const Expr& e)
{
    std::map<std::string, Sort> out;
    collect_variables(e, out);
    return out;
}

std::size_t dag_size(const Expr& e)
{
    std::unordered_set<const Node*> seen;
    std::vector<const Expr*> work{&e};
    while (!work.empty())
    {
        const Expr* x = work.back();
        work.pop_back();
        if (!seen.insert(x->id()).second)
            continue;
        if (x->is_operation())
            for (const auto& o : x->operands())
                work.push_back(&o);
    }
    return seen.size();
}

}  // namespace symx::smt
