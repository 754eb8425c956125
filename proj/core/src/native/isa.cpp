// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/native/isa.hpp"

#include <stdexcept>
#include <string>

namespace symx::native
{
namespace
{
constexpr std::string_view kMnemonics[] = {"HALT", "LOADI", "MOV", "ADD", "SUB", "MUL", "XOR", "AND", "OR", "SHL", "SHR",
    "LOAD", "STORE", "JMP", "JZ", "JNZ", "LTU", "SYSCALL"};
constexpr std::uint8_t kLastOpcode = static_cast<std::uint8_t>(Opcode::Syscall);
static_assert(std::size(kMnemonics) == kLastOpcode + 1);
}  // namespace

std::string_view mnemonic(Opcode op)
{
    const auto i = static_cast<std::uint8_t>(op);
    return i <= kLastOpcode ? kMnemonics[i] : "INVALID";
}

std::optional<Instruction> decode(std::span<const std::uint8_t, kInstructionSize> b)
{
    if (b[0] > kLastOpcode || b[1] >= kRegisterCount || b[2] >= kRegisterCount || b[3] >= kRegisterCount)
        return std::nullopt;
    Instruction insn;
    insn.op = static_cast<Opcode>(b[0]);
    insn.rd = b[1];
    insn.rs1 = b[2];
    insn.rs2 = b[3];
    insn.imm = static_cast<std::uint32_t>(b[4]) | static_cast<std::uint32_t>(b[5]) << 8
        | static_cast<std::uint32_t>(b[6]) << 16 | static_cast<std::uint32_t>(b[7]) << 24;
    return insn;
}

std::array<std::uint8_t, kInstructionSize> encode(const Instruction& insn)
{
    return {static_cast<std::uint8_t>(insn.op), insn.rd, insn.rs1, insn.rs2, static_cast<std::uint8_t>(insn.imm),
        static_cast<std::uint8_t>(insn.imm >> 8), static_cast<std::uint8_t>(insn.imm >> 16),
        static_cast<std::uint8_t>(insn.imm >> 24)};
}

Assembler::Label Assembler::label()
{
    labels_.emplace_back();
    return Label{labels_.size() - 1};
}

void Assembler::bind(Label l)
{
    if (labels_.at(l.id))
        throw std::logic_error("label bound twice");
    labels_[l.id] = here();
}

std::uint32_t Assembler::here() const
{
    return kCodeBase + static_cast<std::uint32_t>(code_.size() * kInstructionSize);
}

void Assembler::emit(Opcode op, unsigned rd, unsigned rs1, unsigned rs2, std::uint32_t imm)
{
    if (rd >= kRegisterCount || rs1 >= kRegisterCount || rs2 >= kRegisterCount)
        throw std::logic_error("register index out of range");
    code_.push_back(Instruction{op, static_cast<std::uint8_t>(rd), static_cast<std::uint8_t>(rs1),
        static_cast<std::uint8_t>(rs2), imm});
}

void Assembler::emit_jump(Opcode op, unsigned rs1, Label target)
{
    fixups_.emplace_back(code_.size(), target.id);
    emit(op, 0, rs1, 0, 0);
}

void Assembler::halt() { emit(Opcode::Halt, 0, 0, 0, 0); }
void Assembler::loadi(unsigned rd, std::uint32_t imm) { emit(Opcode::Loadi, rd, 0, 0, imm); }
void Assembler::mov(unsigned rd, unsigned rs1) { emit(Opcode::Mov, rd, rs1, 0, 0); }
void Assembler::add(unsigned rd, unsigned rs1, unsigned rs2) { emit(Opcode::Add, rd, rs1, rs2, 0); }
void Assembler::sub(unsigned rd, unsigned rs1, unsigned rs2) { emit(Opcode::Sub, rd, rs1, rs2, 0); }
void Assembler::mul(unsigned rd, unsigned rs1, unsigned rs2) { emit(Opcode::Mul, rd, rs1, rs2, 0); }
void Assembler::xor_(unsigned rd, unsigned rs1, unsigned rs2) { emit(Opcode::Xor, rd, rs1, rs2, 0); }
void Assembler::and_(unsigned rd, unsigned rs1, unsigned rs2) { emit(Opcode::And, rd, rs1, rs2, 0); }
void Assembler::or_(unsigned rd, unsigned rs1, unsigned rs2) { emit(Opcode::Or, rd, rs1, rs2, 0); }
void Assembler::shl(unsigned rd, unsigned rs1, unsigned rs2) { emit(Opcode::Shl, rd, rs1, rs2, 0); }
void Assembler::shr(unsigned rd, unsigned rs1, unsigned rs2) { emit(Opcode::Shr, rd, rs1, rs2, 0); }
void Assembler::ltu(unsigned rd, unsigned rs1, unsigned rs2) { emit(Opcode::Ltu, rd, rs1, rs2, 0); }
void Assembler::load(unsigned rd, unsigned rs1, std::uint32_t imm) { emit(Opcode::Load, rd, rs1, 0, imm); }
void Assembler::store(unsigned rs1, std::uint32_t imm, unsigned rs2) { emit(Opcode::Store, 0, rs1, rs2, imm); }
void Assembler::jmp(Label target) { emit_jump(Opcode::Jmp, 0, target); }
void Assembler::jmp(std::uint32_t address) { emit(Opcode::Jmp, 0, 0, 0, address); }
void Assembler::jz(unsigned rs1, Label target) { emit_jump(Opcode::Jz, rs1, target); }
void Assembler::jnz(unsigned rs1, Label target) { emit_jump(Opcode::Jnz, rs1, target); }
void Assembler::syscall() { emit(Opcode::Syscall, 0, 0, 0, 0); }

void Assembler::raw(const Instruction& insn)
{
    code_.push_back(insn);
}

void Assembler::raw_bytes(const std::array<std::uint8_t, kInstructionSize>& bytes)
{
    // Encoded verbatim by finish(); no validation on purpose.
    Instruction marker{};
    marker.op = static_cast<Opcode>(bytes[0]);
    marker.rd = bytes[1];
    marker.rs1 = bytes[2];
    marker.rs2 = bytes[3];
    marker.imm = static_cast<std::uint32_t>(bytes[4]) | static_cast<std::uint32_t>(bytes[5]) << 8
        | static_cast<std::uint32_t>(bytes[6]) << 16 | static_cast<std::uint32_t>(bytes[7]) << 24;
    code_.push_back(marker);
}

void Assembler::sys_exit(std::uint32_t code)
{
    loadi(0, static_cast<std::uint32_t>(Sys::Exit));
    loadi(1, code);
    syscall();
}

void Assembler::sys_exit_reg(unsigned reg)
{
    mov(1, reg);
    loadi(0, static_cast<std::uint32_t>(Sys::Exit));
    syscall();
}

void Assembler::sys_read(std::uint32_t buffer, std::uint32_t length)
{
    loadi(0, static_cast<std::uint32_t>(Sys::Read));
    loadi(1, 0);
    loadi(2, buffer);
    loadi(3, length);
    syscall();
}

void Assembler::sys_write(std::uint32_t buffer, std::uint32_t length)
{
    loadi(0, static_cast<std::uint32_t>(Sys::Write));
    loadi(1, 1);
    loadi(2, buffer);
    loadi(3, length);
    syscall();
}

std::vector<std::uint8_t> Assembler::finish() const
{
    std::vector<Instruction> code = code_;
    for (const auto& [index, label] : fixups_)
    {
        if (!labels_.at(label))
            throw std::logic_error("unbound label " + std::to_string(label));
        code[index].imm = *labels_[label];
    }
    std::vector<std::uint8_t> image;
    image.reserve(code.size() * kInstructionSize);
    for (const auto& insn : code)
        for (auto b : encode(insn))
            image.push_back(b);
    return image;
}

}  // namespace symx::native
