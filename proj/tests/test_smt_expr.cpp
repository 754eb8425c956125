// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "support/oracle.hpp"

#include "symx/error.hpp"
#include "symx/smt/constraints.hpp"
#include "symx/smt/eval.hpp"
#include "symx/smt/simplify.hpp"
#include "symx/smt/smtlib.hpp"

#include <doctest.h>

using namespace symx;
using namespace symx::smt;

namespace
{
Expr bv8(const char* name)
{
    return Expr::variable(name, Sort::bitvec(8));
}
}  // namespace

TEST_CASE("make_constant range checks")
{
    CHECK(make_constant(0, 32).value() == 0);
    CHECK(make_constant(0, 32).sort() == Sort::bitvec(32));
    CHECK(make_constant(255, 8).value() == 0xff);
    CHECK_THROWS_AS(make_constant(256, 8), SortError);
    CHECK_THROWS_AS(make_constant(1, 0), SortError);
    CHECK(make_constant(low_mask(256), 256).value() == low_mask(256));
}

TEST_CASE("make_operation sort rules")
{
    const Expr three = make_operation(Op::BvAdd, {make_constant(1, 32), make_constant(2, 32)});
    REQUIRE(three.is_constant());
    CHECK(three.value() == 3);

    const Expr x = Expr::variable("x", Sort::bitvec(8));
    const Expr y = Expr::variable("y", Sort::bitvec(32));
    CHECK_THROWS_AS(make_operation(Op::Eq, {x, y}), SortError);

    const Expr b = Expr::variable("b", Sort::boolean());
    const Expr sel = make_operation(Op::Ite, {b, make_constant(1, 32), make_constant(0, 32)});
    CHECK(sel.sort() == Sort::bitvec(32));
    CHECK(sel.is_op(Op::Ite));

    CHECK_THROWS_AS(make_operation(Op::Ite, {x, y, y}), SortError);
    CHECK_THROWS_AS(make_operation(Op::BvAdd, {x}), SortError);
    CHECK_THROWS_AS(extract(8, 0, x), SortError);

    const Expr mem = Expr::variable("m", Sort::array(32, 8));
    CHECK(select(mem, y).sort() == Sort::bitvec(8));
    CHECK_THROWS_AS(select(mem, x), SortError);
    CHECK(store(mem, y, x).sort() == Sort::array(32, 8));
}

TEST_CASE("simplifier floor")
{
    const Expr x = bv8("x");
    const Expr a = bv8("a");
    const Expr b = bv8("b");

    CHECK(simplify(Expr::raw(Op::BvXor, {x, x})) == make_constant(0, 8));
    CHECK(simplify(Expr::raw(Op::BvAdd, {make_constant(7, 8), make_constant(250, 8)})) == make_constant(1, 8));
    const Expr cond = Expr::raw(Op::Eq, {make_constant(1, 8), make_constant(1, 8)});
    CHECK(simplify(Expr::raw(Op::Ite, {cond, a, b})) == a);

    CHECK(simplify(Expr::raw(Op::BvAnd, {x, make_constant(0, 8)})) == make_constant(0, 8));
    CHECK(simplify(Expr::raw(Op::BvOr, {x, make_constant(0, 8)})) == x);
    CHECK(simplify(Expr::raw(Op::BvAdd, {x, make_constant(0, 8)})) == x);
    CHECK(simplify(Expr::raw(Op::Eq, {x, x})).is_true());

    // Cut on the CONCAT boundary.
    const Expr cat = Expr::raw(Op::Concat, {a, b});
    CHECK(simplify(Expr::raw(Op::Extract, {cat}, {7, 0})) == b);
    CHECK(simplify(Expr::raw(Op::Extract, {cat}, {15, 8})) == a);
}

TEST_CASE("simplifier extras")
{
    const Expr x = bv8("x");
    const Expr mem = Expr::variable("m", Sort::array(32, 8));
    const Expr i0 = make_constant(0x20000, 32);
    const Expr i1 = make_constant(0x20001, 32);
    const Expr written = store(store(mem, i0, x), i1, make_constant(9, 8));
    CHECK(select(written, i0) == x);
    CHECK(select(written, i1) == make_constant(9, 8));
    CHECK(select(written, make_constant(5, 32)) == select(mem, make_constant(5, 32)));

    // Little-endian word assembled from its own bytes collapses back.
    const Expr w = Expr::variable("w", Sort::bitvec(32));
    const Expr rebuilt = concat(concat(extract(31, 24, w), extract(23, 16, w)), concat(extract(15, 8, w), extract(7, 0, w)));
    CHECK(rebuilt == w);

    CHECK(eq(add(x, make_constant(3, 8)), make_constant(10, 8)) == eq(x, make_constant(7, 8)));
    CHECK(eq(zext(24, x), make_constant(0x100, 32)).is_false());
}

TEST_CASE("evaluate agrees with reference semantics on division corner cases")
{
    const Expr x = bv8("x");
    const Expr y = bv8("y");
    const Op ops[] = {Op::BvUdiv, Op::BvSdiv, Op::BvUrem, Op::BvSrem, Op::BvAshr, Op::BvShl, Op::BvLshr};
    for (Op op : ops)
    {
        const Expr e = Expr::raw(op, {x, y});
        for (unsigned xv : {0u, 1u, 5u, 0x7fu, 0x80u, 0x81u, 0xffu})
            for (unsigned yv : {0u, 1u, 2u, 3u, 7u, 8u, 9u, 0x80u, 0xffu})
            {
                const Assignment env{{"x", xv}, {"y", yv}};
                CHECK(to_u64(evaluate(e, env)) == oracle::eval(e, {{"x", xv}, {"y", yv}}));
            }
    }
}

TEST_CASE("to_smtlib format and determinism")
{
    ConstraintSet empty;
    const std::string s0 = to_smtlib(empty);
    CHECK(s0 == "(set-logic QF_AUFBV)\n(check-sat)\n");

    ConstraintSet cs;
    const Expr x = Expr::variable("x", Sort::bitvec(32));
    cs.add(eq(x, make_constant(9, 32)));
    const std::string s1 = to_smtlib(cs);
    CHECK(s1.find("(declare-fun x () (_ BitVec 32))") != std::string::npos);
    CHECK(s1.find("(assert (= x #x00000009))") != std::string::npos);
    CHECK(to_smtlib(cs) == s1);

    // Declarations are sorted by name regardless of insertion order.
    ConstraintSet order;
    order.add(ult(bv8("zeta"), bv8("alpha")));
    const std::string s2 = to_smtlib(order);
    CHECK(s2.find("alpha") < s2.find("zeta"));
}

TEST_CASE("smtlib round trip")
{
    ConstraintSet cs;
    const Expr x = bv8("stdin_0");
    const Expr y = Expr::variable("w", Sort::bitvec(32));
    const Expr mem = Expr::variable("mem", Sort::array(32, 8));
    const Expr shared = add(zext(24, x), y);
    cs.add(ult(shared, mul(shared, make_constant(3, 32))));
    cs.add(eq(select(store(mem, y, x), add(y, make_constant(1, 32))), make_constant(4, 8)));
    cs.add(lor(slt(x, make_constant(0x10, 8)), eq(sext(24, x), y)));
    cs.add(eq(extract(3, 1, x), Expr::constant(5, 3)));
    const Expr arr = Expr::const_array(Sort::array(256, 256), 0);
    cs.add(eq(select(arr, zext(248, x)), make_constant(0, 256)));
    cs.declare(Expr::variable("unused", Sort::bitvec(8)));

    const std::string text = to_smtlib(cs);
    const ConstraintSet back = parse_script(text);
    CHECK(to_smtlib(back) == text);
    CHECK(back.declarations().count("unused") == 1);
}

TEST_CASE("constraint set lineage")
{
    ConstraintSet parent;
    const Expr x = bv8("x");
    parent.add(ult(x, make_constant(10, 8)));
    ConstraintSet child = parent.fork();
    child.add(ne(x, make_constant(3, 8)));
    CHECK(child.extends(parent));
    CHECK_FALSE(parent.extends(child));
    CHECK(child.inherited() == 1);
    child.add(Expr::boolean(true));
    CHECK(child.size() == 2);
    child.add(Expr::boolean(false));
    CHECK(child.trivially_unsat());
}
