// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/error.hpp"
#include "symx/native/minivm.hpp"

#include <algorithm>

namespace symx::native
{
namespace
{
struct Segment
{
    std::uint32_t base;
    std::vector<std::uint8_t> bytes;
    std::uint8_t perms;
};

/// Plain byte-addressed machine, shares nothing with the symbolic memory.
class Machine
{
public:
    std::vector<Segment> segments;

    Segment* find(std::uint64_t addr, std::uint64_t len, std::uint8_t perms)
    {
        for (auto& s : segments)
            if (addr >= s.base && addr + len <= s.base + s.bytes.size() && (s.perms & perms) == perms)
                return &s;
        return nullptr;
    }
    std::uint32_t load32(Segment& s, std::uint32_t addr) const
    {
        const std::size_t o = addr - s.base;
        return s.bytes[o] | (s.bytes[o + 1] << 8) | (s.bytes[o + 2] << 16) | (static_cast<std::uint32_t>(s.bytes[o + 3]) << 24);
    }
    void store32(Segment& s, std::uint32_t addr, std::uint32_t v) const
    {
        const std::size_t o = addr - s.base;
        for (int i = 0; i < 4; ++i)
            s.bytes[o + i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
};
}  // namespace

ReplayResult concrete_replay(std::span<const std::uint8_t> image, std::span<const std::uint8_t> stdin_bytes,
    const std::vector<std::string>& argv, std::size_t max_steps)
{
    if (image.size() % kInstructionSize != 0 || image.size() > kMaxImageSize)
        throw LoadError("malformed image");
    Machine m;
    if (!image.empty())
        m.segments.push_back({kCodeBase, {image.begin(), image.end()}, kRead | kExec});
    std::vector<std::uint8_t> block(4 + 4 * argv.size());
    auto put32 = [&](std::size_t at, std::uint32_t v) {
        for (int i = 0; i < 4; ++i)
            block[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
    };
    put32(0, static_cast<std::uint32_t>(argv.size()));
    for (std::size_t k = 0; k < argv.size(); ++k)
    {
        put32(4 + 4 * k, kArgvBase + static_cast<std::uint32_t>(block.size()));
        block.insert(block.end(), argv[k].begin(), argv[k].end());
        block.push_back(0);
    }
    m.segments.push_back({kArgvBase, std::move(block), kRead});
    m.segments.push_back({kDataBase, std::vector<std::uint8_t>(kDataSize), kRead | kWrite});

    ReplayResult out;
    std::array<std::uint32_t, kRegisterCount> r{};
    std::uint32_t pc = kCodeBase;
    std::size_t cursor = 0;
    auto finish = [&](engine::Termination t) {
        out.termination = t;
        return out;
    };

    for (std::size_t steps = 0; steps < max_steps; ++steps)
    {
        out.trace.push_back(pc);
        Segment* code = m.find(pc, kInstructionSize, kExec);
        if (code == nullptr)
            return finish(engine::Termination::memory_violation(pc));
        std::array<std::uint8_t, kInstructionSize> raw{};
        std::copy_n(code->bytes.begin() + (pc - code->base), kInstructionSize, raw.begin());
        const auto d = decode(raw);
        if (!d)
            return finish(engine::Termination::invalid_instruction());
        const auto& in = *d;
        const std::uint32_t next = pc + static_cast<std::uint32_t>(kInstructionSize);
        const std::uint32_t a = r[in.rs1];
        const std::uint32_t b = r[in.rs2];
        switch (in.op)
        {
        case Opcode::Halt:
            return finish(engine::Termination::exit(0));
        case Opcode::Loadi: r[in.rd] = in.imm; break;
        case Opcode::Mov: r[in.rd] = a; break;
        case Opcode::Add: r[in.rd] = a + b; break;
        case Opcode::Sub: r[in.rd] = a - b; break;
        case Opcode::Mul: r[in.rd] = a * b; break;
        case Opcode::Xor: r[in.rd] = a ^ b; break;
        case Opcode::And: r[in.rd] = a & b; break;
        case Opcode::Or: r[in.rd] = a | b; break;
        case Opcode::Shl: r[in.rd] = a << (b & 31); break;
        case Opcode::Shr: r[in.rd] = a >> (b & 31); break;
        case Opcode::Ltu: r[in.rd] = a < b ? 1 : 0; break;
        case Opcode::Load:
        case Opcode::Store: {
            const std::uint32_t addr = a + in.imm;
            const bool load = in.op == Opcode::Load;
            Segment* s = m.find(addr, 4, load ? kRead : kWrite);
            if (s == nullptr)
                return finish(engine::Termination::memory_violation(addr));
            if (load)
                r[in.rd] = m.load32(*s, addr);
            else
                m.store32(*s, addr, b);
            break;
        }
        case Opcode::Jmp:
            pc = in.imm;
            continue;
        case Opcode::Jz:
        case Opcode::Jnz:
            pc = ((a == 0) == (in.op == Opcode::Jz)) ? in.imm : next;
            continue;
        case Opcode::Syscall: {
            const auto sys = static_cast<Sys>(r[0]);
            if (sys == Sys::Exit)
                return finish(engine::Termination::exit(r[1]));
            if (sys != Sys::Read && sys != Sys::Write)
                return finish(engine::Termination::invalid_instruction());
            const bool read = sys == Sys::Read;
            if (r[1] != (read ? 0u : 1u))
            {
                r[0] = 0xffffffffu;
                break;
            }
            std::size_t count = r[3];
            if (read)
                count = std::min(count, stdin_bytes.size() - cursor);
            if (count > 0)
            {
                Segment* s = m.find(r[2], count, read ? kWrite : kRead);
                if (s == nullptr)
                    return finish(engine::Termination::memory_violation(r[2]));
                const std::size_t o = r[2] - s->base;
                if (read)
                {
                    std::copy_n(stdin_bytes.begin() + static_cast<std::ptrdiff_t>(cursor), count, s->bytes.begin() + static_cast<std::ptrdiff_t>(o));
                    cursor += count;
                }
                else
                    out.stdout_bytes.insert(out.stdout_bytes.end(), s->bytes.begin() + static_cast<std::ptrdiff_t>(o),
                        s->bytes.begin() + static_cast<std::ptrdiff_t>(o + count));
            }
            r[0] = static_cast<std::uint32_t>(count);
            break;
        }
        }
        pc = next;
    }
    out.step_limit = true;
    out.termination = engine::Termination::abandoned();
    return out;
}

}  // namespace symx::native
