// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "support/collect.hpp"
#include "support/native_fixtures.hpp"

#include "symx/engine/blob.hpp"
#include "symx/error.hpp"
#include "symx/native/minivm.hpp"
#include "symx/smt/eval.hpp"
#include "symx/smt/simplify.hpp"
#include "symx/smt/smtlib.hpp"

#include <doctest.h>

#include <random>

using namespace symx;
using namespace symx::native;
using engine::Engine;
using engine::EngineConfig;
using engine::Termination;
using engine::TerminationKind;

namespace
{
std::array<std::uint8_t, 8> bytes8(std::initializer_list<std::uint8_t> xs)
{
    std::array<std::uint8_t, 8> out{};
    std::copy(xs.begin(), xs.end(), out.begin());
    return out;
}

struct Run
{
    collect::Sink sink;
    engine::Report report;
};

std::unique_ptr<Run> explore(const Program& program, EngineConfig config = {},
    MemoryModel model = MemoryModel::ConcretizingAddress)
{
    MiniVM vm{model};
    Engine engine{vm, config};
    auto run = std::make_unique<Run>();
    engine.set_sink(&run->sink);
    load_program(engine, program);
    run->report = engine.run();
    return run;
}

Program concrete_program(std::vector<std::uint8_t> image, const std::string& input = {})
{
    Program p;
    p.image = std::move(image);
    p.stdin_spec = concrete_bytes(collect::bytes_of(input));
    return p;
}
}  // namespace

TEST_CASE("decode follows the fixed 8-byte layout")
{
    const auto loadi = decode(bytes8({0x01, 0x00, 0x00, 0x00, 0x2A, 0x00, 0x00, 0x00}));
    REQUIRE(loadi);
    CHECK(loadi->op == Opcode::Loadi);
    CHECK(loadi->rd == 0);
    CHECK(loadi->imm == 42);

    const auto halt = decode(bytes8({}));
    REQUIRE(halt);
    CHECK(halt->op == Opcode::Halt);

    CHECK_FALSE(decode(bytes8({0xFF})));
    CHECK_FALSE(decode(bytes8({0x03, 0x08})));

    const Instruction store{Opcode::Store, 0, 3, 5, 0x20010};
    const auto round = decode(encode(store));
    REQUIRE(round);
    CHECK(round->rs1 == 3);
    CHECK(round->rs2 == 5);
    CHECK(round->imm == 0x20010);
}

TEST_CASE("concrete replay of tiny images")
{
    Assembler halt;
    halt.halt();
    const auto r = concrete_replay(halt.finish(), {});
    CHECK(r.termination == Termination::exit(0));
    CHECK(r.trace == std::vector<std::uint64_t>{0x1000});

    // Reads past the end of stdin return 0.
    Assembler eof;
    eof.sys_read(kDataBase, 4);
    eof.mov(4, 0);
    eof.sys_read(kDataBase, 4);
    eof.add(4, 4, 0);
    eof.sys_exit_reg(4);
    const std::vector<std::uint8_t> two{'A', 'B'};
    const auto e1 = concrete_replay(eof.finish(), two);
    const auto e2 = concrete_replay(eof.finish(), two);
    CHECK(e1.termination == Termination::exit(2));
    CHECK(e1.trace == e2.trace);

    Assembler spin;
    auto top = spin.label();
    spin.bind(top);
    spin.jmp(top);
    const auto s = concrete_replay(spin.finish(), {}, {}, 100);
    CHECK(s.step_limit);
    CHECK(s.trace.size() == 100);

    // Falling off the end of the code faults at the first unmapped pc.
    Assembler nop;
    nop.loadi(0, 1);
    const auto f = concrete_replay(nop.finish(), {});
    CHECK(f.termination == Termination::memory_violation(0x1008));
    CHECK(f.trace == std::vector<std::uint64_t>{0x1000, 0x1008});
}

TEST_CASE("load_program validates the image and registers inputs")
{
    MiniVM vm;
    Engine engine{vm};
    CHECK_THROWS_AS(load_program(engine, concrete_program(std::vector<std::uint8_t>(12))), LoadError);
    CHECK_THROWS_AS(load_program(engine, concrete_program(std::vector<std::uint8_t>(kMaxImageSize + 8))), LoadError);

    Program p;
    p.image = std::vector<std::uint8_t>(8);
    p.stdin_spec = parse_byte_spec("++.txt");
    auto& s = load_program(engine, p);
    REQUIRE(s.inputs().size() == 2);
    CHECK(s.inputs()[0].variable.name() == "stdin_0");
    CHECK(s.inputs()[1].variable.name() == "stdin_1");
    CHECK(s.context<MiniVMContext>().os.stdin_bytes.size() == 6);
    CHECK(s.context<MiniVMContext>().os.stdin_bytes[2] == smt::Expr::constant('.', 8));

    Program q;
    q.image = std::vector<std::uint8_t>(8);
    q.stdin_spec = concrete_bytes(std::vector<std::uint8_t>{0xAA});
    auto rest = symbolic_bytes(256);
    q.stdin_spec.insert(q.stdin_spec.begin(), ByteSpec{0xAA});
    q.stdin_spec.insert(q.stdin_spec.end(), rest.begin(), rest.end());
    auto& t = load_program(engine, q);
    REQUIRE(t.inputs().size() == 256);
    CHECK(t.inputs().front().variable.name() == "stdin_2");
    CHECK(t.inputs().back().variable.name() == "stdin_257");
    CHECK(t.inputs().front().provenance == "stdin:2");
}

TEST_CASE("read copies byte specs into memory")
{
    Assembler a;
    a.sys_read(kDataBase, 4);
    a.mov(4, 0);
    a.halt();
    MiniVM vm;
    EngineConfig config;
    config.keep_terminated = true;
    Engine engine{vm, config};
    Program p;
    p.image = a.finish();
    p.stdin_spec = parse_byte_spec("+A+B");
    load_program(engine, p);
    engine.run();
    REQUIRE(engine.terminated().size() == 1);
    auto& ctx = engine.terminated()[0]->context<MiniVMContext>();
    CHECK(ctx.memory.read_byte(kDataBase + 0).name() == "stdin_0");
    CHECK(ctx.memory.read_byte(kDataBase + 1) == smt::Expr::constant(0x41, 8));
    CHECK(ctx.memory.read_byte(kDataBase + 2).name() == "stdin_2");
    CHECK(ctx.memory.read_byte(kDataBase + 3) == smt::Expr::constant(0x42, 8));
    CHECK(ctx.regs[4] == smt::Expr::constant(4, 32));
    CHECK(ctx.os.stdin_cursor == 4);
}

TEST_CASE("syscall results and faults")
{
    SUBCASE("exit code")
    {
        Assembler a;
        a.sys_exit(7);
        auto run = explore(concrete_program(a.finish()));
        REQUIRE(run->sink.cases.size() == 1);
        CHECK(run->sink.cases[0].termination == Termination::exit(7));
    }
    SUBCASE("EOF and bad descriptors")
    {
        Assembler a;
        a.sys_read(kDataBase, 8);
        a.mov(4, 0);
        a.sys_read(kDataBase, 8);
        a.mov(5, 0);
        a.loadi(0, 2);  // write on fd 0
        a.loadi(1, 0);
        a.loadi(2, kDataBase);
        a.loadi(3, 1);
        a.syscall();
        a.add(4, 4, 5);
        a.add(4, 4, 0);
        a.sys_exit_reg(4);
        auto run = explore(concrete_program(a.finish(), "xyz"));
        REQUIRE(run->sink.cases.size() == 1);
        CHECK(run->sink.cases[0].termination == Termination::exit(2));  // 3 + 0 - 1
    }
    SUBCASE("unknown syscall number")
    {
        Assembler a;
        a.loadi(0, 9);
        a.syscall();
        auto run = explore(concrete_program(a.finish()));
        CHECK(run->sink.cases.at(0).termination == Termination::invalid_instruction());
    }
    SUBCASE("write to code and unmapped reads")
    {
        Assembler a;
        a.loadi(4, 0x1000);
        a.store(4, 0, 4);
        auto run = explore(concrete_program(a.finish()));
        CHECK(run->sink.cases.at(0).termination == Termination::memory_violation(0x1000));

        Assembler b;
        b.load(4, 7, 0x50000);
        auto run2 = explore(concrete_program(b.finish()));
        CHECK(run2->sink.cases.at(0).termination == Termination::memory_violation(0x50000));
    }
    SUBCASE("write appends to stdout")
    {
        Assembler a;
        a.sys_read(kDataBase, 3);
        a.sys_write(kDataBase, 3);
        a.halt();
        auto run = explore(concrete_program(a.finish(), "hey"));
        CHECK(run->sink.cases.at(0).files.at("stdout") == "hey");
    }
}

TEST_CASE("memory read-after-write agrees on every byte value")
{
    Memory m;
    m.map(Region{kDataBase, 0x100, kRead | kWrite, "data", nullptr});
    const auto x = smt::Expr::variable("x", smt::Sort::bitvec(8));
    const auto word = smt::zext(24, x);
    m.write(kDataBase + 4, word, 4);
    const auto back = smt::simplify(m.read(kDataBase + 4, 4));
    CHECK(back == word);

    // Symbolic address: the array path must round-trip too.
    const auto i = smt::Expr::variable("i", smt::Sort::bitvec(8));
    const auto addr = smt::add(smt::Expr::constant(kDataBase, 32), smt::zext(24, i));
    m.write(addr, word, 4);
    const auto sym_back = m.read(addr, 4);
    for (unsigned xv = 0; xv < 256; xv += 7)
        for (unsigned iv = 0; iv < 0xfc; iv += 13)
        {
            const smt::Assignment env{{"x", xv}, {"i", iv}};
            CHECK(smt::evaluate(sym_back, env) == smt::evaluate(word, env));
        }
}

TEST_CASE("path counting")
{
    SUBCASE("HALT has one path")
    {
        Assembler a;
        a.halt();
        auto run = explore(concrete_program(a.finish()));
        CHECK(run->report.terminated == 1);
        CHECK(run->report.forks == 0);
    }
    SUBCASE("one symbolic JZ has two paths")
    {
        Program p;
        p.image = fixtures::sequential_branches(1);
        p.stdin_spec = symbolic_bytes(1);
        auto run = explore(p);
        CHECK(run->report.terminated == 2);
        CHECK(run->report.forks == 1);
    }
    SUBCASE("ten branches")
    {
        MiniVM vm;
        Engine engine{vm};
        collect::Sink sink;
        engine.set_sink(&sink);
        std::size_t forked = 0;
        engine.events().subscribe(engine::EventKind::StateForked, [&](const engine::Event&) { ++forked; });
        Program p;
        p.image = fixtures::sequential_branches(10);
        p.stdin_spec = symbolic_bytes(10);
        load_program(engine, p);
        const auto& report = engine.run();
        CHECK(report.terminated == 1024);
        CHECK(report.forks == 1023);
        CHECK(forked == 2046);
        CHECK(sink.traces().size() == 1024);
    }
}

TEST_CASE("stdin symbols are registered whether or not they are read")
{
    Assembler a;
    a.halt();
    Program p;
    p.image = a.finish();
    p.stdin_spec = parse_byte_spec("+x++");
    MiniVM vm;
    Engine engine{vm};
    CHECK(load_program(engine, p).inputs().size() == 3);
}

TEST_CASE("concrete and symbolic execution agree on concrete input")
{
    std::mt19937 rng(7);
    for (const auto& bomb : fixtures::logic_bombs())
    {
        CAPTURE(bomb.name);
        for (int round = 0; round < 2; ++round)
        {
            std::string input;
            for (char c : bomb.stdin_spec)
                input.push_back(c == '+' ? static_cast<char>(rng() & 0xff) : c);
            std::vector<std::string> argv;
            Program p = concrete_program(bomb.image, input);
            for (const auto& arg : bomb.argv)
            {
                std::string concrete = arg;
                for (auto& c : concrete)
                    if (c == '+')
                        c = static_cast<char>('a' + rng() % 26);
                argv.push_back(concrete);
                p.argv.push_back(parse_byte_spec(concrete));
            }
            auto run = explore(p);
            const auto replay = concrete_replay(bomb.image, collect::bytes_of(input), argv);
            REQUIRE(run->sink.cases.size() == 1);
            const auto& c = run->sink.cases[0];
            CHECK(c.trace == replay.trace);
            CHECK(c.termination == replay.termination);
            CHECK(c.files.at("stdout") == std::string(replay.stdout_bytes.begin(), replay.stdout_bytes.end()));
        }
    }
}

TEST_CASE("generated test cases replay to the recorded trace")
{
    for (const auto& bomb : {fixtures::magic_value(), fixtures::table_lookup(), fixtures::unsatisfiable_guard()})
    {
        CAPTURE(bomb.name);
        auto run = explore(fixtures::program_of(bomb));
        bool reached = false;
        for (const auto& c : run->sink.cases)
        {
            REQUIRE(c.model);
            const auto r = concrete_replay(bomb.image, collect::bytes_of(c.files.at("stdin")),
                collect::split_argv(c.files.at("argv")));
            CHECK(r.trace == c.trace);
            CHECK(r.termination == c.termination);
            reached = reached || std::find(r.trace.begin(), r.trace.end(), bomb.bomb_pc) != r.trace.end();
        }
        CHECK(reached == bomb.satisfiable);
    }
}

TEST_CASE("both memory models reach the same outcomes")
{
    for (const auto& bomb : {fixtures::table_lookup(), fixtures::symbolic_store()})
    {
        CAPTURE(bomb.name);
        auto outcomes = [&](MemoryModel model) {
            auto run = explore(fixtures::program_of(bomb), {}, model);
            std::set<std::pair<std::vector<std::uint64_t>, std::string>> out;
            for (const auto& c : run->sink.cases)
                out.emplace(c.trace, engine::to_string(c.termination));
            return out;
        };
        const auto concretizing = outcomes(MemoryModel::ConcretizingAddress);
        CHECK(concretizing.size() >= 2);
        CHECK(outcomes(MemoryModel::FullySymbolic) == concretizing);
    }
}

TEST_CASE("hooks see states at their location")
{
    const auto program = fixtures::hook_program();
    Program p;
    p.image = program.image;
    p.stdin_spec = symbolic_bytes(2);

    SUBCASE("abandon prunes matching states")
    {
        MiniVM vm;
        Engine engine{vm};
        collect::Sink sink;
        engine.set_sink(&sink);
        std::size_t calls = 0;
        engine.hooks().add(program.exit_pc, [&](engine::State& s) {
            ++calls;
            const auto& r5 = s.context<MiniVMContext>().regs[5];
            if (s.can_be_true(smt::eq(r5, smt::Expr::constant(0x44, 32))))
                s.abandon();
        });
        load_program(engine, p);
        const auto& report = engine.run();
        CHECK(calls == 32);
        CHECK(report.abandoned == 2);
        CHECK(sink.cases.size() == 30);
    }
    SUBCASE("constrain narrows the model")
    {
        MiniVM vm;
        Engine engine{vm};
        collect::Sink sink;
        engine.set_sink(&sink);
        engine.hooks().add(program.exit_pc, [&](engine::State& s) {
            s.constrain(smt::eq(s.context<MiniVMContext>().regs[4], smt::Expr::constant(0x11, 32)));
        });
        load_program(engine, p);
        engine.run();
        std::size_t with_model = 0;
        for (const auto& c : sink.cases)
            if (c.model)
            {
                ++with_model;
                CHECK(static_cast<unsigned char>(c.files.at("stdin")[1]) == 0x11);
            }
        // Bit 0 of stdin[1] clear contradicts 0x11, so those 16 paths are abandoned.
        CHECK(with_model == 16);
    }
}

TEST_CASE("state serialization round trips")
{
    Assembler a;
    a.halt();
    Program p;
    p.image = fixtures::magic_value().image;
    p.stdin_spec = parse_byte_spec("+A++");
    p.argv = {parse_byte_spec("p+")};
    MiniVM vm;
    Engine engine{vm};
    auto& s = load_program(engine, p);
    s.constraints().add(smt::ne(s.inputs()[0].variable, smt::Expr::constant(3, 8)));
    s.append_trace(0x1000);
    s.add_message("hello");

    engine::BlobWriter out;
    s.serialize(out, vm.tag());
    const auto blob = out.take();
    const auto copy = engine::deserialize_state(blob, vm);
    CHECK(copy->id() == s.id());
    CHECK(copy->trace() == s.trace());
    CHECK(copy->messages() == s.messages());
    CHECK(copy->inputs().size() == s.inputs().size());
    CHECK(smt::to_smtlib(copy->constraints()) == smt::to_smtlib(s.constraints()));
    const auto& x = s.context<MiniVMContext>();
    const auto& y = copy->context<MiniVMContext>();
    CHECK(y.pc == x.pc);
    CHECK(y.regs == x.regs);
    CHECK(y.os.stdin_bytes == x.os.stdin_bytes);
    CHECK(y.argv == x.argv);
    CHECK(y.memory.read(kArgvBase + 4, 4) == x.memory.read(kArgvBase + 4, 4));
    CHECK(y.memory.read_byte(kArgvBase + 9) == x.memory.read_byte(kArgvBase + 9));

    // A blob from another platform is rejected.
    engine::BlobWriter other;
    s.serialize(other, "evm");
    CHECK_THROWS_AS(engine::deserialize_state(other.take(), vm), Error);
}

TEST_CASE("worker count does not change the explored paths")
{
    Program p;
    p.image = fixtures::sequential_branches(6);
    p.stdin_spec = symbolic_bytes(6);
    auto traces = [&](unsigned workers, engine::Strategy strategy) {
        EngineConfig config;
        config.workers = workers;
        config.strategy = strategy;
        config.seed = 11;
        return explore(p, config)->sink.traces();
    };
    const auto one = traces(1, engine::Strategy::Fifo);
    CHECK(one.size() == 64);
    CHECK(traces(4, engine::Strategy::Fifo) == one);
    CHECK(traces(3, engine::Strategy::Lifo) == one);
    CHECK(traces(2, engine::Strategy::Random) == one);
}

TEST_CASE("limits stop exploration early")
{
    Program p;
    p.image = fixtures::sequential_branches(8);
    p.stdin_spec = symbolic_bytes(8);
    EngineConfig config;
    config.max_states = 20;
    auto run = explore(p, config);
    CHECK(run->report.limit_reached);
    CHECK(run->sink.cases.size() < 256);
}
