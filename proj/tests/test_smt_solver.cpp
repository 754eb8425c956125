// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/error.hpp"
#include "symx/smt/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace symx;
using namespace symx::smt;

namespace
{
const Expr x = Expr::variable("x", Sort::bitvec(8));

Expr c8(unsigned v)
{
    return make_constant(v, 8);
}

std::set<Word> as_set(const std::vector<Word>& v)
{
    return {v.begin(), v.end()};
}
}  // namespace

TEST_CASE("check verdicts")
{
    Solver solver;
    ConstraintSet contradiction;
    contradiction.add(ugt(x, c8(5)));
    contradiction.add(ult(x, c8(3)));
    CHECK(solver.check(contradiction).verdict == Verdict::Unsat);

    ConstraintSet sat;
    sat.add(eq(add(x, c8(1)), c8(10)));
    CHECK(solver.check(sat).verdict == Verdict::Sat);

    CHECK(solver.check(ConstraintSet{}).verdict == Verdict::Sat);
    CHECK(solver.check(ConstraintSet{}, Expr::boolean(false)).verdict == Verdict::Unsat);
}

TEST_CASE("get_value")
{
    Solver solver;
    ConstraintSet cs;
    // Built raw so the solver, not the simplifier, does the work.
    cs.add(Expr::raw(Op::Eq, {Expr::raw(Op::BvAdd, {x, c8(1)}), c8(10)}));
    CHECK(solver.get_value(cs, x) == 9);

    CHECK(solver.get_value(ConstraintSet{}, c8(42)) == 42);

    ConstraintSet small;
    small.add(ult(x, c8(2)));
    const Word v = solver.get_value(small, x);
    CHECK(v < 2);

    // Compound expressions go through a helper variable.
    CHECK(solver.get_value(cs, mul(x, c8(3))) == 27);

    ConstraintSet unsat;
    unsat.add(Expr::raw(Op::Not, {Expr::raw(Op::Eq, {x, x})}));
    CHECK_THROWS_AS(solver.get_value(unsat, x), NoModel);
}

TEST_CASE("can_be_true and must_be_true")
{
    Solver solver;
    ConstraintSet three;
    three.add(eq(x, c8(3)));
    CHECK(solver.can_be_true(three, eq(x, c8(3))));
    CHECK(solver.must_be_true(three, eq(x, c8(3))));
    CHECK_FALSE(solver.can_be_true(three, eq(x, c8(4))));

    ConstraintSet below;
    below.add(ult(x, c8(10)));
    CHECK(solver.can_be_true(below, eq(x, c8(4))));
    CHECK_FALSE(solver.must_be_true(below, eq(x, c8(4))));
}

TEST_CASE("all_values")
{
    Solver solver;
    ConstraintSet lt3;
    lt3.add(ult(x, c8(3)));
    CHECK(as_set(solver.all_values(lt3, x, 10)) == std::set<Word>{0, 1, 2});

    ConstraintSet seven;
    seven.add(eq(x, c8(7)));
    CHECK(solver.all_values(seven, x, 10) == std::vector<Word>{7});

    ConstraintSet none;
    none.add(Expr::raw(Op::Not, {Expr::raw(Op::Eq, {x, x})}));
    CHECK(solver.all_values(none, x, 10).empty());

    // Truncation at the cap.
    const auto capped = solver.all_values(ConstraintSet{}, x, 5);
    CHECK(capped.size() == 5);
    CHECK(as_set(capped).size() == 5);
}

TEST_CASE("min and max")
{
    Solver solver;
    ConstraintSet cs;
    cs.add(ugt(x, c8(17)));
    cs.add(ult(x, c8(200)));
    cs.add(ne(x, c8(18)));
    CHECK(solver.min_value(cs, x) == 19);
    CHECK(solver.max_value(cs, x) == 199);

    const Expr w = Expr::variable("w", Sort::bitvec(256));
    ConstraintSet wide;
    wide.add(ugt(w, make_constant(Word(1) << 200, 256)));
    CHECK(solver.min_value(wide, w) == (Word(1) << 200) + 1);
    CHECK(solver.max_value(wide, w) == low_mask(256));
}

TEST_CASE("model completion")
{
    Solver solver;
    ConstraintSet cs;
    cs.add(eq(x, c8(0x68)));
    const Expr y = Expr::variable("y", Sort::bitvec(8));
    const auto m = solver.model(cs, {x, y});
    CHECK(m.at("x") == 0x68);
    CHECK(m.at("y") == 0);
}

TEST_CASE("session survives many queries and sorts")
{
    Solver solver;
    ConstraintSet cs;
    for (unsigned i = 0; i < 40; ++i)
    {
        const Expr v = Expr::variable("v" + std::to_string(i), Sort::bitvec(32));
        cs.add(eq(v, make_constant(i * 3, 32)));
        CHECK(solver.get_value(cs, v) == i * 3);
    }
    CHECK(solver.stats().queries >= 40);
}

TEST_CASE("missing solver is reported as unavailable")
{
    SolverConfig config;
    config.command = {"/nonexistent/solver-binary"};
    CHECK_THROWS_AS(
        {
            Solver solver(config);
            ConstraintSet cs;
            cs.add(eq(x, c8(1)));
            solver.check(cs);
        },
        SolverUnavailable);
}

TEST_CASE("timeout yields unknown, then the session recovers")
{
    SolverConfig config = SolverConfig::from_environment();
    config.timeout = std::chrono::milliseconds(150);
    Solver solver(config);
    // Factoring a 128-bit product: far beyond 150 ms for a bit-blaster.
    const Expr p = Expr::variable("p", Sort::bitvec(128));
    const Expr q = Expr::variable("q", Sort::bitvec(128));
    ConstraintSet hard;
    const Word n = (Word(1) << 127) - 1;  // Mersenne prime: factors must be 1 and n
    hard.add(eq(mul(p, q), make_constant(n, 128)));
    hard.add(ugt(p, make_constant(1, 128)));
    hard.add(ugt(q, make_constant(1, 128)));
    hard.add(ult(p, make_constant(Word(1) << 64, 128)));
    hard.add(ult(q, make_constant(Word(1) << 64, 128)));
    CHECK(solver.check(hard).verdict == Verdict::Unknown);
    CHECK_THROWS_AS(solver.can_be_true(hard, Expr::boolean(true)), SolverUnknown);

    ConstraintSet easy;
    easy.add(eq(x, c8(1)));
    CHECK(solver.check(easy).verdict == Verdict::Sat);
}
