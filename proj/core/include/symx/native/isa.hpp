// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace symx::native
{
inline constexpr std::uint32_t kCodeBase = 0x1000;
inline constexpr std::uint32_t kArgvBase = 0x10000;
inline constexpr std::uint32_t kDataBase = 0x20000;
inline constexpr std::uint32_t kDataSize = 0x10000;
/// Code may not reach into the argv region.
inline constexpr std::uint32_t kMaxImageSize = kArgvBase - kCodeBase;
inline constexpr std::size_t kInstructionSize = 8;
inline constexpr unsigned kRegisterCount = 8;

enum class Opcode : std::uint8_t
{
    Halt = 0x00,
    Loadi = 0x01,
    Mov = 0x02,
    Add = 0x03,
    Sub = 0x04,
    Mul = 0x05,
    Xor = 0x06,
    And = 0x07,
    Or = 0x08,
    Shl = 0x09,
    Shr = 0x0A,
    Load = 0x0B,
    Store = 0x0C,
    Jmp = 0x0D,
    Jz = 0x0E,
    Jnz = 0x0F,
    Ltu = 0x10,
    Syscall = 0x11,
};

std::string_view mnemonic(Opcode op);

/// Syscall numbers (in R0).
enum class Sys : std::uint32_t
{
    Exit = 0,
    Read = 1,
    Write = 2,
};

struct Instruction
{
    Opcode op = Opcode::Halt;
    std::uint8_t rd = 0;
    std::uint8_t rs1 = 0;
    std::uint8_t rs2 = 0;
    std::uint32_t imm = 0;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// nullopt for an unknown opcode or a register index >= 8.
std::optional<Instruction> decode(std::span<const std::uint8_t, kInstructionSize> bytes);
std::array<std::uint8_t, kInstructionSize> encode(const Instruction& insn);

/// Small two-pass assembler with forward labels. Addresses are absolute
/// (the image is loaded at kCodeBase).
class Assembler
{
public:
    struct Label
    {
        std::size_t id;
    };

    Label label();
    /// Binds `l` to the next emitted instruction.
    void bind(Label l);
    std::uint32_t here() const;

    void halt();
    void loadi(unsigned rd, std::uint32_t imm);
    void mov(unsigned rd, unsigned rs1);
    void add(unsigned rd, unsigned rs1, unsigned rs2);
    void sub(unsigned rd, unsigned rs1, unsigned rs2);
    void mul(unsigned rd, unsigned rs1, unsigned rs2);
    void xor_(unsigned rd, unsigned rs1, unsigned rs2);
    void and_(unsigned rd, unsigned rs1, unsigned rs2);
    void or_(unsigned rd, unsigned rs1, unsigned rs2);
    void shl(unsigned rd, unsigned rs1, unsigned rs2);
    void shr(unsigned rd, unsigned rs1, unsigned rs2);
    void ltu(unsigned rd, unsigned rs1, unsigned rs2);
    void load(unsigned rd, unsigned rs1, std::uint32_t imm = 0);
    void store(unsigned rs1, std::uint32_t imm, unsigned rs2);
    void jmp(Label target);
    void jmp(std::uint32_t address);
    void jz(unsigned rs1, Label target);
    void jnz(unsigned rs1, Label target);
    void syscall();

    /// Raw instruction (for invalid-encoding tests).
    void raw(const Instruction& insn);
    void raw_bytes(const std::array<std::uint8_t, kInstructionSize>& bytes);

    // Syscall conveniences; clobber R0..R3.
    void sys_exit(std::uint32_t code);
    /// exit(R<reg>)
    void sys_exit_reg(unsigned reg);
    void sys_read(std::uint32_t buffer, std::uint32_t length);
    void sys_write(std::uint32_t buffer, std::uint32_t length);

    /// Resolves labels; throws std::logic_error on an unbound label.
    std::vector<std::uint8_t> finish() const;

private:
    void emit(Opcode op, unsigned rd, unsigned rs1, unsigned rs2, std::uint32_t imm);
    void emit_jump(Opcode op, unsigned rs1, Label target);

    std::vector<Instruction> code_;
    std::vector<std::optional<std::uint32_t>> labels_;
    std::vector<std::pair<std::size_t, std::size_t>> fixups_;  // instruction index, label id
};

}  // namespace symx::native
