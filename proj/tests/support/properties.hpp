// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Randomized agreement between the solver layer and brute force over every
// assignment of two 8-bit variables. Shared by the unit and acceptance runs.

#include "support/oracle.hpp"
#include "support/random_expr.hpp"

#include "symx/smt/simplify.hpp"
#include "symx/smt/smtlib.hpp"
#include "symx/smt/solver.hpp"

#include <set>
#include <string>
#include <vector>

namespace properties
{
using namespace symx;
using namespace symx::smt;

struct Tally
{
    int agreed = 0;
    int total = 0;
    /// Property specific: sat instances, or exhaustive enumerations.
    int covered = 0;
    std::vector<std::string> mismatches;

    bool perfect() const { return agreed == total; }
};

inline const std::vector<std::string>& xy()
{
    static const std::vector<std::string> names{"x", "y"};
    return names;
}

template <class F>
void for_each_assignment(F&& f)
{
    std::vector<oracle::u64> v(2);
    for (unsigned a = 0; a < 256; ++a)
        for (unsigned b = 0; b < 256; ++b)
        {
            v[0] = a;
            v[1] = b;
            f(v);
        }
}

/// simplify(t) evaluates like t everywhere.
inline Tally simplify_equivalence(int instances)
{
    gen::RandomExpr g(0x5eed0001u, xy());
    Tally t;
    for (int i = 0; i < instances; ++i)
    {
        const Expr raw = (i % 4 == 0) ? g.boolean(4) : g.bv8(4);
        const Expr simple = simplify(raw);
        oracle::Program lhs{raw, xy()};
        oracle::Program rhs{simple, xy()};
        bool same = simple.sort() == raw.sort();
        for_each_assignment([&](const std::vector<oracle::u64>& v) { same = same && lhs(v) == rhs(v); });
        ++t.total;
        t.agreed += same;
        if (!same)
            t.mismatches.push_back(term_to_smtlib(raw) + " vs " + term_to_smtlib(simple));
    }
    return t;
}

/// check() says Sat exactly when some assignment satisfies every assertion.
inline Tally check_vs_brute_force(int instances, Solver& solver)
{
    gen::RandomExpr g(0x5eed0002u, xy());
    Tally t;
    for (int i = 0; i < instances; ++i)
    {
        ConstraintSet cs;
        std::vector<oracle::Program> programs;
        for (int k = 0; k < 1 + i % 3; ++k)
        {
            const Expr a = g.boolean(3);
            programs.emplace_back(a, xy());
            cs.add(a);
        }
        bool feasible = false;
        for_each_assignment([&](const std::vector<oracle::u64>& v) {
            if (feasible)
                return;
            bool all = true;
            for (auto& p : programs)
                all = all && p(v) == 1;
            feasible = all;
        });
        const Verdict v = solver.check(cs).verdict;
        ++t.total;
        t.covered += feasible;
        const bool ok = v == (feasible ? Verdict::Sat : Verdict::Unsat);
        t.agreed += ok;
        if (!ok)
            t.mismatches.push_back("instance " + std::to_string(i));
    }
    return t;
}

/// all_values below the cap is exactly the feasible set; at the cap it is a
/// subset of it.
inline Tally all_values_completeness(int instances, Solver& solver)
{
    gen::RandomExpr g(0x5eed0003u, xy());
    constexpr std::size_t cap = 12;
    Tally t;
    for (int i = 0; i < instances; ++i)
    {
        ConstraintSet cs;
        const Expr guard = g.boolean(2);
        cs.add(guard);
        // A narrow window keeps most feasible sets under the cap.
        const Expr x = g.variables()[0];
        const unsigned bound = 1 + i % 6;
        cs.add(ult(x, make_constant(bound, 8)));
        const Expr target = (i % 2 == 0) ? g.bv8(2) : bvand(g.bv8(2), make_constant(0x0f, 8));

        oracle::Program guard_p{guard, xy()};
        oracle::Program target_p{target, xy()};
        std::set<std::uint64_t> feasible;
        for_each_assignment([&](const std::vector<oracle::u64>& v) {
            if (v[0] < bound && guard_p(v) == 1)
                feasible.insert(target_p(v));
        });
        const auto got = solver.all_values(cs, target, cap);
        std::set<std::uint64_t> got_set;
        for (const auto& v : got)
            got_set.insert(to_u64(v));
        bool ok = got_set.size() == got.size();
        if (got.size() < cap)
        {
            ++t.covered;
            ok = ok && got_set == feasible;
        }
        else
            for (auto v : got_set)
                ok = ok && feasible.contains(v);
        ++t.total;
        t.agreed += ok;
        if (!ok)
            t.mismatches.push_back("instance " + std::to_string(i));
    }
    return t;
}

}  // namespace properties
