// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/native/minivm.hpp"

#include "symx/error.hpp"
#include "symx/smt/eval.hpp"
#include "symx/smt/simplify.hpp"

namespace symx::native
{
using engine::Concretize;
using engine::Continue;
using engine::Event;
using engine::EventKind;
using engine::State;
using engine::StepResult;
using engine::Terminate;
using engine::Termination;
using smt::Expr;

namespace
{
Expr c32(std::uint64_t v)
{
    return Expr::constant(v & 0xffffffffu, 32);
}

std::vector<std::uint8_t> le32(std::uint32_t v)
{
    return {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v >> 16),
        static_cast<std::uint8_t>(v >> 24)};
}

Expr input_byte(const ByteSpec& spec, std::string name)
{
    return spec ? Expr::constant(*spec, 8) : Expr::variable(std::move(name), smt::Sort::bitvec(8));
}

std::uint8_t resolve_byte(const Expr& e, const engine::Model& model)
{
    return static_cast<std::uint8_t>(smt::evaluate(e, model) & 0xff);
}
}  // namespace

std::vector<ByteSpec> parse_byte_spec(std::string_view text)
{
    std::vector<ByteSpec> out;
    for (char c : text)
        out.push_back(c == '+' ? ByteSpec{} : ByteSpec{static_cast<std::uint8_t>(c)});
    return out;
}

std::vector<ByteSpec> concrete_bytes(std::span<const std::uint8_t> bytes)
{
    return {bytes.begin(), bytes.end()};
}

std::vector<ByteSpec> symbolic_bytes(std::size_t n)
{
    return std::vector<ByteSpec>(n);
}

MiniVMContext::MiniVMContext()
{
    regs.fill(c32(0));
}

std::unique_ptr<engine::PlatformContext> MiniVMContext::clone() const
{
    return std::make_unique<MiniVMContext>(*this);
}

void MiniVMContext::serialize(engine::BlobWriter& out) const
{
    for (const auto& r : regs)
        out.expr(r);
    out.u32(pc);
    memory.serialize(out);
    auto bytes = [&](const std::vector<Expr>& v) {
        out.u32(static_cast<std::uint32_t>(v.size()));
        for (const auto& e : v)
            out.expr(e);
    };
    bytes(os.stdin_bytes);
    out.u64(os.stdin_cursor);
    bytes(os.stdout_bytes);
    out.boolean(os.exit_code.has_value());
    out.u32(os.exit_code.value_or(0));
    out.u32(static_cast<std::uint32_t>(argv.size()));
    for (const auto& a : argv)
        bytes(a);
}

std::unique_ptr<MiniVMContext> MiniVMContext::deserialize(engine::BlobReader& in)
{
    auto ctx = std::make_unique<MiniVMContext>();
    for (auto& r : ctx->regs)
        r = in.expr();
    ctx->pc = in.u32();
    ctx->memory = Memory::deserialize(in);
    auto bytes = [&] {
        std::vector<Expr> v(in.u32());
        for (auto& e : v)
            e = in.expr();
        return v;
    };
    ctx->os.stdin_bytes = bytes();
    ctx->os.stdin_cursor = in.u64();
    ctx->os.stdout_bytes = bytes();
    const bool has_exit = in.boolean();
    const auto code = in.u32();
    if (has_exit)
        ctx->os.exit_code = code;
    ctx->argv.resize(in.u32());
    for (auto& a : ctx->argv)
        a = bytes();
    return ctx;
}

engine::State& load_program(engine::Engine& engine, const Program& program)
{
    const auto& image = program.image;
    if (image.size() % kInstructionSize != 0)
        throw LoadError("image size " + std::to_string(image.size()) + " is not a multiple of 8");
    if (image.size() > kMaxImageSize)
        throw LoadError("image of " + std::to_string(image.size()) + " bytes exceeds the code region");

    auto ctx = std::make_unique<MiniVMContext>();
    if (!image.empty())
        ctx->memory.map(Region{kCodeBase, static_cast<std::uint32_t>(image.size()), kRead | kExec, "code",
            std::make_shared<const std::vector<std::uint8_t>>(image)});

    // argv block: argc, pointer table, then NUL-terminated strings.
    std::vector<std::uint8_t> block = le32(static_cast<std::uint32_t>(program.argv.size()));
    std::uint32_t cursor = kArgvBase + 4 + 4 * static_cast<std::uint32_t>(program.argv.size());
    for (const auto& arg : program.argv)
    {
        for (auto b : le32(cursor))
            block.push_back(b);
        cursor += static_cast<std::uint32_t>(arg.size()) + 1;
    }
    std::vector<std::pair<std::uint32_t, Expr>> symbolic;
    std::vector<std::vector<Expr>> argv_exprs;
    for (std::size_t k = 0; k < program.argv.size(); ++k)
    {
        std::vector<Expr> exprs;
        for (std::size_t j = 0; j < program.argv[k].size(); ++j)
        {
            const auto& spec = program.argv[k][j];
            Expr e = input_byte(spec, "argv_" + std::to_string(k) + "_" + std::to_string(j));
            if (!spec)
                symbolic.emplace_back(kArgvBase + static_cast<std::uint32_t>(block.size()), e);
            block.push_back(spec.value_or(0));
            exprs.push_back(e);
        }
        block.push_back(0);
        argv_exprs.push_back(std::move(exprs));
    }
    if (kArgvBase + block.size() > kDataBase)
        throw LoadError("argv does not fit below the data region");
    ctx->memory.map(Region{kArgvBase, static_cast<std::uint32_t>(block.size()), kRead, "argv",
        std::make_shared<const std::vector<std::uint8_t>>(block)});
    for (const auto& [addr, e] : symbolic)
        ctx->memory.write_byte(addr, e);
    ctx->memory.map(Region{kDataBase, kDataSize, kRead | kWrite, "data", nullptr});
    ctx->argv = argv_exprs;

    for (std::size_t i = 0; i < program.stdin_spec.size(); ++i)
        ctx->os.stdin_bytes.push_back(input_byte(program.stdin_spec[i], "stdin_" + std::to_string(i)));

    engine::State& state = engine.add_state(std::move(ctx));
    auto& c = state.context<MiniVMContext>();
    for (std::size_t k = 0; k < c.argv.size(); ++k)
        for (std::size_t j = 0; j < c.argv[k].size(); ++j)
            if (c.argv[k][j].is_variable())
                state.register_input(c.argv[k][j], "argv:" + std::to_string(k) + ":" + std::to_string(j));
    for (std::size_t i = 0; i < c.os.stdin_bytes.size(); ++i)
        if (c.os.stdin_bytes[i].is_variable())
            state.register_input(c.os.stdin_bytes[i], "stdin:" + std::to_string(i));
    return state;
}

std::uint64_t MiniVM::location(const State& state) const
{
    return state.context<MiniVMContext>().pc;
}

std::unique_ptr<engine::PlatformContext> MiniVM::deserialize_context(engine::BlobReader& in) const
{
    return MiniVMContext::deserialize(in);
}

StepResult MiniVM::step(State& state, engine::StepEnv& env) const
{
    auto& ctx = state.context<MiniVMContext>();
    const std::uint32_t pc = ctx.pc;
    const Region* code = ctx.memory.find(pc, kInstructionSize, kExec);
    if (code == nullptr)
        return Terminate{Termination::memory_violation(pc)};
    // Executable regions are never writable, so their initial bytes are current.
    std::array<std::uint8_t, kInstructionSize> raw{};
    for (std::size_t i = 0; i < kInstructionSize; ++i)
    {
        const std::size_t off = pc - code->base + i;
        raw[i] = off < code->init->size() ? (*code->init)[off] : 0;
    }
    const auto decoded = decode(raw);
    if (!decoded)
    {
        env.instruction.mnemonic = "INVALID";
        return Terminate{Termination::invalid_instruction()};
    }
    const Instruction insn = *decoded;
    env.instruction.mnemonic = std::string(mnemonic(insn.op));
    env.instruction.opcode = static_cast<std::uint32_t>(insn.op);

    auto& regs = ctx.regs;
    const std::uint32_t next = pc + static_cast<std::uint32_t>(kInstructionSize);
    auto set = [&](const Expr& value) {
        regs[insn.rd] = value;
        env.instruction.results.push_back(value);
        ctx.pc = next;
        return Continue{};
    };
    auto binary = [&](auto&& f) {
        const Expr& a = regs[insn.rs1];
        const Expr& b = regs[insn.rs2];
        env.instruction.operands = {a, b};
        return set(f(a, b));
    };
    const Expr shift_mask = c32(31);

    // Resolves a memory address to a concrete value, or says how to get one.
    struct Resolved
    {
        std::optional<std::uint32_t> address;
        std::optional<StepResult> event;
    };
    auto resolve = [&](const Expr& addr, unsigned size, std::uint8_t perms) -> Resolved {
        if (auto v = state.concrete(addr))
            return {static_cast<std::uint32_t>(*v), std::nullopt};
        if (model_ == MemoryModel::ConcretizingAddress)
        {
            Concretize c;
            c.expression = addr;
            c.guard = ctx.memory.guard(addr, size, perms);
            c.reexecute = true;
            return {std::nullopt, StepResult{std::move(c)}};
        }
        return {std::nullopt, std::nullopt};
    };

    switch (insn.op)
    {
    case Opcode::Halt:
        ctx.os.exit_code = 0;
        return Terminate{Termination::exit(0)};
    case Opcode::Loadi:
        return set(c32(insn.imm));
    case Opcode::Mov:
        env.instruction.operands = {regs[insn.rs1]};
        return set(regs[insn.rs1]);
    case Opcode::Add:
        return binary([](const Expr& a, const Expr& b) { return smt::add(a, b); });
    case Opcode::Sub:
        return binary([](const Expr& a, const Expr& b) { return smt::sub(a, b); });
    case Opcode::Mul:
        return binary([](const Expr& a, const Expr& b) { return smt::mul(a, b); });
    case Opcode::Xor:
        return binary([](const Expr& a, const Expr& b) { return smt::bvxor(a, b); });
    case Opcode::And:
        return binary([](const Expr& a, const Expr& b) { return smt::bvand(a, b); });
    case Opcode::Or:
        return binary([](const Expr& a, const Expr& b) { return smt::bvor(a, b); });
    case Opcode::Shl:
        return binary([&](const Expr& a, const Expr& b) { return smt::shl(a, smt::bvand(b, shift_mask)); });
    case Opcode::Shr:
        return binary([&](const Expr& a, const Expr& b) { return smt::lshr(a, smt::bvand(b, shift_mask)); });
    case Opcode::Ltu:
        return binary([](const Expr& a, const Expr& b) { return smt::bool_to_bv(smt::ult(a, b), 32); });

    case Opcode::Load:
    case Opcode::Store: {
        const bool is_load = insn.op == Opcode::Load;
        const std::uint8_t perms = is_load ? kRead : kWrite;
        const Expr addr = smt::add(regs[insn.rs1], c32(insn.imm));
        env.instruction.operands = {addr};
        auto r = resolve(addr, 4, perms);
        if (r.event)
            return std::move(*r.event);
        Expr value;
        if (r.address)
        {
            if (ctx.memory.find(*r.address, 4, perms) == nullptr)
                return Terminate{Termination::memory_violation(*r.address)};
            if (is_load)
                value = ctx.memory.read(*r.address, 4);
            else
                ctx.memory.write(*r.address, value = regs[insn.rs2], 4);
        }
        else
        {
            // Fully symbolic: prune addresses outside mapped memory.
            const Expr g = smt::simplify(ctx.memory.guard(addr, 4, perms));
            if (g.is_false())
            {
                state.add_message("symbolic address has no mapped value");
                return Terminate{Termination::abandoned()};
            }
            state.constrain(g);
            if (is_load)
                value = ctx.memory.read(addr, 4);
            else
                ctx.memory.write(addr, value = regs[insn.rs2], 4);
        }
        const Expr where = r.address ? c32(*r.address) : addr;
        env.events.emit(Event{.kind = is_load ? EventKind::MemoryRead : EventKind::MemoryWrite,
            .state = state,
            .location = pc,
            .address = where,
            .value = value,
            .size = 4});
        if (is_load)
            return set(value);
        env.instruction.operands.push_back(value);
        ctx.pc = next;
        return Continue{};
    }

    case Opcode::Jmp:
        ctx.pc = insn.imm;
        return Continue{};
    case Opcode::Jz:
    case Opcode::Jnz: {
        const bool jz = insn.op == Opcode::Jz;
        const Expr cond = smt::eq(regs[insn.rs1], c32(0));
        env.instruction.operands = {regs[insn.rs1]};
        if (cond.is_constant())
        {
            ctx.pc = cond.is_true() == jz ? insn.imm : next;
            return Continue{};
        }
        Concretize c;
        c.expression = cond;
        c.setter = [jz, target = insn.imm, next](State& s, const Word& is_zero) {
            s.context<MiniVMContext>().pc = (is_zero != 0) == jz ? target : next;
        };
        return c;
    }
    case Opcode::Syscall:
        return syscall(state, env);
    }
    return Terminate{Termination::invalid_instruction()};
}

StepResult MiniVM::syscall(State& state, engine::StepEnv& env) const
{
    auto& ctx = state.context<MiniVMContext>();
    auto& regs = ctx.regs;
    const std::uint32_t next = ctx.pc + static_cast<std::uint32_t>(kInstructionSize);
    env.instruction.operands = {regs[0], regs[1], regs[2], regs[3]};

    // Concretizes one argument, or returns the event that will.
    auto arg = [&](unsigned reg, engine::Policy policy, std::optional<Expr> guard,
                   std::string_view what) -> std::variant<std::uint32_t, StepResult> {
        if (auto v = state.concrete(regs[reg]))
            return static_cast<std::uint32_t>(*v);
        Concretize c;
        c.expression = regs[reg];
        c.policy = policy;
        c.guard = std::move(guard);
        c.reexecute = true;
        if (policy.kind == engine::Policy::Kind::One)
            c.setter = [what = std::string(what)](State& s, const Word& v) {
                s.add_message("syscall " + what + " concretized to " + v.str());
            };
        return StepResult{std::move(c)};
    };
#define SYMX_ARG(var, ...)                                   \
    std::uint32_t var;                                       \
    {                                                        \
        auto r_ = arg(__VA_ARGS__);                          \
        if (auto* e_ = std::get_if<StepResult>(&r_))         \
            return std::move(*e_);                           \
        var = std::get<std::uint32_t>(r_);                   \
    }

    SYMX_ARG(number, 0, engine::Policy::one(), std::nullopt, "number")
    switch (static_cast<Sys>(number))
    {
    case Sys::Exit: {
        SYMX_ARG(code, 1, engine::Policy::one(), std::nullopt, "exit code")
        ctx.os.exit_code = code;
        return Terminate{Termination::exit(code)};
    }
    case Sys::Read:
    case Sys::Write: {
        const bool is_read = static_cast<Sys>(number) == Sys::Read;
        SYMX_ARG(fd, 1, engine::Policy::one(), std::nullopt, "fd")
        SYMX_ARG(length, 3, engine::Policy::one(), std::nullopt, "length")
        if (fd != (is_read ? 0u : 1u))
        {
            regs[0] = c32(0xffffffffu);
            ctx.pc = next;
            return Continue{};
        }
        const std::uint8_t perms = is_read ? kWrite : kRead;
        std::size_t count = length;
        if (is_read)
            count = std::min<std::size_t>(length, ctx.os.stdin_bytes.size() - ctx.os.stdin_cursor);
        if (count > 0)
        {
            SYMX_ARG(buffer, 2, engine::Policy::all(), ctx.memory.guard(regs[2], static_cast<unsigned>(count), perms), "buffer")
            if (ctx.memory.find(buffer, count, perms) == nullptr)
                return Terminate{Termination::memory_violation(buffer)};
            for (std::size_t i = 0; i < count; ++i)
            {
                const auto addr = static_cast<std::uint32_t>(buffer + i);
                if (is_read)
                {
                    const Expr& b = ctx.os.stdin_bytes[ctx.os.stdin_cursor + i];
                    ctx.memory.write_byte(addr, b);
                    env.events.emit(Event{.kind = EventKind::MemoryWrite, .state = state, .location = ctx.pc, .address = c32(addr), .value = b, .size = 1});
                }
                else
                {
                    Expr b = ctx.memory.read_byte(addr);
                    env.events.emit(Event{.kind = EventKind::MemoryRead, .state = state, .location = ctx.pc, .address = c32(addr), .value = b, .size = 1});
                    ctx.os.stdout_bytes.push_back(std::move(b));
                }
            }
            if (is_read)
                ctx.os.stdin_cursor += count;
        }
        regs[0] = c32(count);
        env.instruction.results = {regs[0]};
        ctx.pc = next;
        return Continue{};
    }
    }
#undef SYMX_ARG
    env.instruction.mnemonic = "SYSCALL?";
    return Terminate{Termination::invalid_instruction()};
}

engine::TestcaseFiles MiniVM::render_testcase(const State& state, const engine::Model& model) const
{
    const auto& ctx = state.context<MiniVMContext>();
    engine::TestcaseFiles files;
    std::string argv;
    for (const auto& arg : ctx.argv)
    {
        for (const auto& b : arg)
            argv.push_back(static_cast<char>(resolve_byte(b, model)));
        argv.push_back('\0');
    }
    files["argv"] = std::move(argv);
    std::string in;
    for (const auto& b : ctx.os.stdin_bytes)
        in.push_back(static_cast<char>(resolve_byte(b, model)));
    files["stdin"] = std::move(in);
    std::string out;
    for (const auto& b : ctx.os.stdout_bytes)
        out.push_back(static_cast<char>(resolve_byte(b, model)));
    files["stdout"] = std::move(out);
    return files;
}

}  // namespace symx::native
