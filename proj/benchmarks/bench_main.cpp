// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "support/evm_fixtures.hpp"
#include "support/native_fixtures.hpp"
#include "support/random_expr.hpp"

#include "symx/engine/engine.hpp"
#include "symx/evm/evm.hpp"
#include "symx/evm/keccak.hpp"
#include "symx/native/minivm.hpp"
#include "symx/smt/simplify.hpp"
#include "symx/smt/solver.hpp"

#include <benchmark/benchmark.h>

using namespace symx;

namespace
{
void BM_Keccak(benchmark::State& state)
{
    std::vector<std::uint8_t> data(static_cast<std::size_t>(state.range(0)), 0x5a);
    for (auto _ : state)
        benchmark::DoNotOptimize(evm::keccak256(data));
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Keccak)->Arg(32)->Arg(136)->Arg(4096);

void BM_Simplify(benchmark::State& state)
{
    gen::RandomExpr g(7, {"x", "y"});
    std::vector<smt::Expr> terms;
    for (int i = 0; i < 256; ++i)
        terms.push_back(g.bv8(static_cast<int>(state.range(0))));
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(smt::simplify(terms[i++ % terms.size()]));
}
BENCHMARK(BM_Simplify)->Arg(3)->Arg(6);

void BM_SolverCheck(benchmark::State& state)
{
    gen::RandomExpr g(11, {"x", "y"});
    smt::Solver solver;
    std::vector<smt::ConstraintSet> sets(64);
    for (auto& cs : sets)
        cs.add(g.boolean(3));
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(solver.check(sets[i++ % sets.size()]));
}
BENCHMARK(BM_SolverCheck)->Unit(benchmark::kMicrosecond);

/// Full exploration of n sequential branches (2^n paths).
void BM_ExploreBranches(benchmark::State& state)
{
    const auto n = static_cast<unsigned>(state.range(0));
    const unsigned workers = static_cast<unsigned>(state.range(1));
    native::Program p;
    p.image = fixtures::sequential_branches(n);
    p.stdin_spec = native::symbolic_bytes(n);
    for (auto _ : state)
    {
        native::MiniVM vm;
        engine::EngineConfig config;
        config.workers = workers;
        engine::Engine engine{vm, config};
        native::load_program(engine, p);
        benchmark::DoNotOptimize(engine.run().terminated);
    }
    state.counters["paths"] = static_cast<double>(1u << n);
}
BENCHMARK(BM_ExploreBranches)->Args({6, 1})->Args({8, 1})->Args({8, 4})->Unit(benchmark::kMillisecond);

void BM_EvmDispatch(benchmark::State& state)
{
    for (auto _ : state)
    {
        evm::EVM vm;
        evm::World world = evm::World::with_caller();
        const Word target = world.create_contract(evm_fixtures::dispatch());
        engine::Engine engine{vm};
        evm::add_world(engine, world);
        benchmark::DoNotOptimize(evm::explore_transactions(engine, target, 1, 36, evm::kDefaultGas).terminated);
    }
}
BENCHMARK(BM_EvmDispatch)->Unit(benchmark::kMillisecond);

void BM_ConcreteReplay(benchmark::State& state)
{
    const auto bomb = fixtures::counting_loop();
    const std::vector<std::uint8_t> input(64, 0x41);
    for (auto _ : state)
        benchmark::DoNotOptimize(native::concrete_replay(bomb.image, input));
}
BENCHMARK(BM_ConcreteReplay);
}  // namespace

BENCHMARK_MAIN();
