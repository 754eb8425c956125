// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

// Randomized agreement between the library and brute force over every
// assignment of two 8-bit variables.

#include "support/oracle.hpp"
#include "support/properties.hpp"
#include "support/random_expr.hpp"

#include "symx/smt/simplify.hpp"
#include "symx/smt/solver.hpp"

#include <doctest.h>

#include <set>

using namespace symx;
using namespace symx::smt;

namespace
{
constexpr int kInstances = 1000;
}  // namespace

TEST_CASE("simplify is equivalent to the original term")
{
    const auto t = properties::simplify_equivalence(kInstances);
    for (const auto& m : t.mismatches)
        MESSAGE("mismatch: " << m);
    CHECK(t.agreed == kInstances);
}

TEST_CASE("simplify over four variables")
{
    // Four 8-bit variables: each ranges over 16 values (boundaries plus a
    // fixed spread), 65536 combinations per term.
    gen::RandomExpr g(0x5eed0004u, {"a", "b", "c", "d"});
    const unsigned values[16] = {0, 1, 2, 3, 0x10, 0x3f, 0x40, 0x55, 0x7e, 0x7f, 0x80, 0x81, 0xaa, 0xc3, 0xfe, 0xff};
    int agreed = 0;
    constexpr int n = 200;
    for (int i = 0; i < n; ++i)
    {
        const Expr raw = g.bv8(5);
        const Expr simple = simplify(raw);
        const std::vector<std::string> names{"a", "b", "c", "d"};
        oracle::Program lhs{raw, names};
        oracle::Program rhs{simple, names};
        bool same = true;
        std::vector<oracle::u64> v(4);
        for (unsigned k = 0; k < 65536 && same; ++k)
        {
            for (unsigned j = 0; j < 4; ++j)
                v[j] = values[(k >> (4 * j)) & 15];
            same = lhs(v) == rhs(v);
        }
        agreed += same;
    }
    CHECK(agreed == n);
}

TEST_CASE("check agrees with brute-force satisfiability")
{
    Solver solver;
    const auto t = properties::check_vs_brute_force(kInstances, solver);
    CHECK(t.agreed == kInstances);
    // Both verdicts must actually be exercised.
    CHECK(t.covered > kInstances / 10);
    CHECK(t.covered < kInstances * 9 / 10);
}

TEST_CASE("all_values is complete below the cap")
{
    Solver solver;
    const auto t = properties::all_values_completeness(kInstances, solver);
    CHECK(t.agreed == kInstances);
    CHECK(t.covered > kInstances / 2);
}

TEST_CASE("must_be_true implies can_be_true")
{
    gen::RandomExpr g(0x5eed0005u, {"x", "y"});
    Solver solver;
    for (int i = 0; i < 200; ++i)
    {
        ConstraintSet cs;
        cs.add(g.boolean(2));
        if (solver.check(cs).verdict != Verdict::Sat)
            continue;
        const Expr c = g.boolean(2);
        if (solver.must_be_true(cs, c))
            CHECK(solver.can_be_true(cs, c));
    }
}
