// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include "support/collect.hpp"
#include "support/evm_fixtures.hpp"
#include "support/keccak_ref.hpp"
#include "support/native_fixtures.hpp"
#include "support/properties.hpp"

#include "symx/evm/analysis.hpp"
#include "symx/evm/evm.hpp"
#include "symx/evm/keccak.hpp"
#include "symx/native/minivm.hpp"
#include "symx/smt/simplify.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace symx;
using engine::Engine;
using engine::EngineConfig;

namespace
{
using Clock = std::chrono::steady_clock;
using Traces = std::set<std::vector<std::uint64_t>>;

struct Verdict
{
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Native runs -----------------------------------------------------------

struct NativeRun
{
    engine::Report report;
    std::vector<collect::Case> cases;
    double seconds = 0;
};

NativeRun explore(const native::Program& program, unsigned workers = 1,
    std::function<void(Engine&)> setup = {})
{
    native::MiniVM vm;
    EngineConfig config;
    config.workers = workers;
    config.wall_clock = std::chrono::seconds(300);
    Engine engine{vm, config};
    collect::Sink sink;
    engine.set_sink(&sink);
    if (setup)
        setup(engine);
    native::load_program(engine, program);
    const auto t0 = Clock::now();
    NativeRun run;
    run.report = engine.run();
    run.seconds = seconds_since(t0);
    run.cases = std::move(sink.cases);
    return run;
}

native::Program branches_program()
{
    native::Program p;
    p.image = fixtures::sequential_branches(10);
    p.stdin_spec = native::symbolic_bytes(10);
    return p;
}

Traces traces_of(const std::vector<collect::Case>& cases)
{
    Traces out;
    for (const auto& c : cases)
        out.insert(c.trace);
    return out;
}

/// Concrete re-execution of a saved test case.
native::ReplayResult replay(const fixtures::Bomb& bomb, const collect::Case& c)
{
    return native::concrete_replay(bomb.image, collect::bytes_of(c.files.at("stdin")),
        collect::split_argv(c.files.at("argv")));
}

// EVM runs --------------------------------------------------------------

struct EvmSession
{
    explicit EvmSession(std::vector<std::uint8_t> code, unsigned workers = 1, Word balance = 0)
        : world{evm::World::with_caller()}
    {
        EngineConfig config;
        config.workers = workers;
        config.keep_terminated = true;
        target = world.create_contract(std::move(code), balance);
        engine = std::make_unique<Engine>(vm, config);
        engine->set_sink(&sink);
    }

    void run(std::size_t data_size)
    {
        evm::add_world(*engine, world);
        evm::explore_transactions(*engine, target, 1, data_size, evm::kDefaultGas);
    }

    evm::EVM vm;
    evm::World world;
    Word target;
    std::unique_ptr<Engine> engine;
    collect::Sink sink;
};

// Criteria --------------------------------------------------------------

Verdict path_count()
{
    const auto run = explore(branches_program());
    Verdict v;
    v.pass = run.report.terminated == 1024 && run.report.forks == 1023 && run.cases.size() == 1024 &&
             traces_of(run.cases).size() == 1024 && run.seconds < 120;
    v.detail = fmt("terminated=%zu forks=%zu distinct traces=%zu in %.1fs", run.report.terminated,
        run.report.forks, traces_of(run.cases).size(), run.seconds);
    return v;
}

struct BombResults
{
    std::size_t satisfiable = 0;
    std::size_t defused = 0;
    bool unsat_reached = false;
    std::size_t tests = 0;
    std::size_t matches = 0;
    std::vector<std::string> missed;
    double slowest = 0;
};

const BombResults& bomb_results()
{
    static const BombResults results = [] {
        BombResults r;
        for (const auto& bomb : fixtures::logic_bombs())
        {
            const auto run = explore(fixtures::program_of(bomb));
            r.slowest = std::max(r.slowest, run.seconds);
            bool reached = false;
            for (const auto& c : run.cases)
            {
                if (!c.model)
                    continue;
                ++r.tests;
                const auto result = replay(bomb, c);
                if (!result.step_limit && result.trace == c.trace && result.termination == c.termination)
                    ++r.matches;
                if (std::find(result.trace.begin(), result.trace.end(), bomb.bomb_pc) != result.trace.end())
                    reached = true;
            }
            if (bomb.satisfiable)
            {
                ++r.satisfiable;
                r.defused += reached && !run.report.timed_out;
                if (!reached)
                    r.missed.push_back(bomb.name);
            }
            else
                r.unsat_reached = r.unsat_reached || reached;
        }
        return r;
    }();
    return results;
}

Verdict logic_bombs()
{
    const auto& r = bomb_results();
    Verdict v;
    v.pass = r.satisfiable >= 10 && r.defused == r.satisfiable && !r.unsat_reached && r.slowest < 300;
    v.detail = fmt("defused %zu/%zu satisfiable bombs, unsatisfiable bomb %s, slowest %.1fs", r.defused,
        r.satisfiable, r.unsat_reached ? "REACHED" : "not reached", r.slowest);
    for (const auto& name : r.missed)
        v.detail += " missed:" + name;
    return v;
}

Verdict replay_soundness()
{
    const auto& r = bomb_results();
    Verdict v;
    v.pass = r.tests > 0 && r.matches == r.tests;
    v.detail = fmt("%zu/%zu replays MATCH", r.matches, r.tests);
    return v;
}

Verdict solver_properties()
{
    smt::Solver solver;
    const auto s = properties::simplify_equivalence(1000);
    const auto c = properties::check_vs_brute_force(1000, solver);
    const auto a = properties::all_values_completeness(1000, solver);
    Verdict v;
    v.pass = s.perfect() && c.perfect() && a.perfect();
    v.detail = fmt("simplify %d/%d, check %d/%d, all_values %d/%d", s.agreed, s.total, c.agreed, c.total,
        a.agreed, a.total);
    return v;
}

Verdict keccak_vectors()
{
    auto lib = [](const std::vector<std::uint8_t>& m) { return evm::digest_hex(evm::keccak256(m)); };
    const std::vector<std::uint8_t> empty, abc{'a', 'b', 'c'};
    int agreed = 0, total = 0;
    auto agree = [&](const std::vector<std::uint8_t>& m, const std::string& expected) {
        ++total;
        agreed += lib(m) == expected && keccak_ref::hex256(m) == expected;
    };
    agree(empty, "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    agree(abc, "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
    std::mt19937_64 rng(0xacce97);
    for (int i = 0; i < 100; ++i)
    {
        std::vector<std::uint8_t> m(rng() % 512);
        for (auto& b : m)
            b = static_cast<std::uint8_t>(rng());
        agree(m, keccak_ref::hex256(m));
    }
    return {agreed == total, fmt("%d/%d digests agree", agreed, total)};
}

struct DispatchRun
{
    Traces traces;
    double coverage = 0;
    std::set<std::string> selectors;
};

DispatchRun dispatch_run(unsigned workers)
{
    EvmSession s(evm_fixtures::dispatch(), workers);
    evm::Coverage cov(s.world);
    cov.subscribe(s.engine->events());
    s.run(36);
    DispatchRun r;
    r.traces = s.sink.traces();
    r.coverage = cov.aggregate().percent();
    for (const auto& c : s.sink.cases)
    {
        const auto& input = c.files.at("input");
        const auto at = input.find("data=0x");
        if (at != std::string::npos)
            r.selectors.insert(input.substr(at + 7, 8));
    }
    return r;
}

Verdict dispatch_coverage()
{
    const auto r = dispatch_run(1);
    const std::string a = fmt("%08x", evm_fixtures::kSelectorA);
    const std::string b = fmt("%08x", evm_fixtures::kSelectorB);
    Verdict v;
    v.pass = r.coverage == 100.0 && r.selectors.contains(a) && r.selectors.contains(b);
    v.detail = fmt("coverage %.2f%%, %zu test cases, selectors %s %s", r.coverage, r.traces.size(),
        r.selectors.contains(a) ? a.c_str() : "missing", r.selectors.contains(b) ? b.c_str() : "missing");
    return v;
}

Verdict rollback()
{
    EvmSession s(evm_fixtures::store_then_revert(), 1, 1000);
    s.run(32);
    bool revert_exact = false, stop_committed = false;
    for (const auto& st : s.engine->terminated())
    {
        const auto& world = st->context<evm::EVMContext>().world;
        if (*st->termination() == engine::Termination::revert())
        {
            bool same = world.accounts.size() == s.world.accounts.size();
            for (const auto& [addr, acct] : s.world.accounts)
            {
                const auto* now = world.find(addr);
                same = same && now && now->storage == acct.storage && now->balance == acct.balance &&
                       now->nonce == acct.nonce;
            }
            revert_exact = same;
        }
        else if (st->termination()->kind == engine::TerminationKind::Exit)
        {
            const auto slot0 = smt::simplify(
                smt::select(world.find(s.target)->storage, smt::Expr::constant(0, 256)));
            stop_committed = slot0 == smt::Expr::constant(42, 256);
        }
    }
    return {revert_exact && stop_committed, fmt("revert state identical: %s, sibling slot0 == 42: %s",
                                                 revert_exact ? "yes" : "no", stop_committed ? "yes" : "no")};
}

Verdict worker_independence()
{
    const auto p = branches_program();
    const bool branches_same = traces_of(explore(p, 1).cases) == traces_of(explore(p, 4).cases);
    const bool dispatch_same = dispatch_run(1).traces == dispatch_run(4).traces;
    return {branches_same && dispatch_same, fmt("branch traces %s, dispatch traces %s",
                                                branches_same ? "identical" : "DIFFER",
                                                dispatch_same ? "identical" : "DIFFER")};
}

Verdict hook_semantics()
{
    const auto fixture = fixtures::hook_program();
    native::Program p;
    p.image = fixture.image;
    p.stdin_spec = native::symbolic_bytes(2);
    const auto predicate = [](engine::State& s) {
        const auto& r5 = s.context<native::MiniVMContext>().regs[5];
        return s.can_be_true(smt::eq(r5, smt::Expr::constant(0x44, 32)));
    };

    // Enumerate: which states would the predicate hit, without pruning.
    std::mutex mutex;
    std::set<std::uint64_t> feasible_ids;
    const auto baseline = explore(p, 1, [&](Engine& e) {
        e.hooks().add(fixture.exit_pc, [&](engine::State& s) {
            if (predicate(s))
            {
                std::lock_guard lock{mutex};
                feasible_ids.insert(s.id());
            }
        });
    });
    Traces expected;
    for (const auto& c : baseline.cases)
        if (!feasible_ids.contains(c.id))
            expected.insert(c.trace);

    const auto pruned = explore(p, 1, [&](Engine& e) {
        e.hooks().add(fixture.exit_pc, [&](engine::State& s) {
            if (predicate(s))
                s.abandon();
        });
    });
    const auto got = traces_of(pruned.cases);
    Verdict v;
    v.pass = !feasible_ids.empty() && got == expected &&
             pruned.report.abandoned == feasible_ids.size() &&
             got.size() + feasible_ids.size() == traces_of(baseline.cases).size();
    v.detail = fmt("%zu states unpruned, %zu feasible for R5==0x44, %zu remain after abandon",
        baseline.cases.size(), feasible_ids.size(), got.size());
    return v;
}

Verdict overflow_detector()
{
    EvmSession s(evm_fixtures::add_calldata_words());
    evm::OverflowDetector detector(s.world);
    detector.subscribe(s.engine->events());
    s.run(64);
    const auto findings = detector.findings();
    if (findings.size() != 1)
        return {false, fmt("%zu findings", findings.size())};
    using boost::multiprecision::cpp_int;
    const auto& f = findings[0];
    cpp_int a = 0, b = 0;
    for (int i = 0; i < 32; ++i)
    {
        const auto byte = [&](int k) {
            const auto it = f.witness.find("txdata_0_" + std::to_string(k));
            return it == f.witness.end() ? cpp_int(0) : cpp_int(it->second);
        };
        a = (a << 8) | byte(i);
        b = (b << 8) | byte(32 + i);
    }
    const cpp_int sum = a + b;
    const bool wraps = sum >= (cpp_int(1) << 256);
    return {wraps, fmt("1 finding (%s at pc %zu), witness sum %s 2^256", f.mnemonic.c_str(), f.pc,
                       wraps ? ">=" : "<")};
}
}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"path count", path_count},
        {"logic bombs", logic_bombs},
        {"replay soundness", replay_soundness},
        {"solver properties", solver_properties},
        {"keccak vectors", keccak_vectors},
        {"evm dispatch coverage", dispatch_coverage},
        {"rollback exactness", rollback},
        {"worker independence", worker_independence},
        {"hook semantics", hook_semantics},
        {"overflow detector", overflow_detector},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const auto t0 = Clock::now();
        Verdict v;
        try
        {
            v = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s  %2zu %-22s %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
            v.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
