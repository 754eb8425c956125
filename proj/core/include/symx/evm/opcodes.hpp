// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/word.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symx::evm
{
namespace op
{
inline constexpr std::uint8_t STOP = 0x00, ADD = 0x01, MUL = 0x02, SUB = 0x03, DIV = 0x04, SDIV = 0x05, MOD = 0x06,
                              SMOD = 0x07, LT = 0x10, GT = 0x11, SLT = 0x12, SGT = 0x13, EQ = 0x14, ISZERO = 0x15,
                              AND = 0x16, OR = 0x17, XOR = 0x18, NOT = 0x19, BYTE = 0x1a, SHL = 0x1b, SHR = 0x1c,
                              SAR = 0x1d, SHA3 = 0x20, ADDRESS = 0x30, BALANCE = 0x31, CALLER = 0x33, CALLVALUE = 0x34,
                              CALLDATALOAD = 0x35, CALLDATASIZE = 0x36, CALLDATACOPY = 0x37, CODESIZE = 0x38,
                              CODECOPY = 0x39, RETURNDATASIZE = 0x3d, RETURNDATACOPY = 0x3e, POP = 0x50, MLOAD = 0x51,
                              MSTORE = 0x52, MSTORE8 = 0x53, SLOAD = 0x54, SSTORE = 0x55, JUMP = 0x56, JUMPI = 0x57,
                              PC = 0x58, MSIZE = 0x59, GAS = 0x5a, JUMPDEST = 0x5b, PUSH1 = 0x60, PUSH32 = 0x7f,
                              DUP1 = 0x80, DUP16 = 0x8f, SWAP1 = 0x90, SWAP16 = 0x9f, CALL = 0xf1, RETURN = 0xf3,
                              REVERT = 0xfd;
}  // namespace op

struct OpInfo
{
    std::string_view name;
    std::uint8_t pops;
    std::uint8_t pushes;
    /// Base gas; SHA3 adds 6 per word on top.
    std::uint32_t gas;
};

/// nullptr for opcodes outside the supported subset.
const OpInfo* op_info(std::uint8_t opcode);

/// Immediate bytes following `opcode` (non-zero only for PUSH1..PUSH32).
unsigned immediate_size(std::uint8_t opcode);

/// Offsets that start an instruction (PUSH data skipped).
std::vector<std::size_t> instruction_offsets(std::span<const std::uint8_t> code);
std::set<std::size_t> jump_destinations(std::span<const std::uint8_t> code);

std::vector<std::uint8_t> parse_hex(std::string_view text);
std::string hex_string(std::span<const std::uint8_t> bytes);

/// Label-resolving bytecode builder; jump targets are PUSH2 immediates.
class Assembler
{
public:
    struct Label
    {
        std::size_t id;
    };

    Label label();
    /// Binds `l` here and emits JUMPDEST.
    void bind(Label l);
    void op(std::uint8_t opcode);
    /// Shortest PUSH holding `value` (PUSH1 for zero).
    void push(const Word& value);
    void push_bytes(std::span<const std::uint8_t> bytes);
    void push_label(Label l);
    void jump(Label l);
    void jumpi(Label l);
    std::size_t size() const noexcept { return code_.size(); }

    std::vector<std::uint8_t> finish() const;

private:
    std::vector<std::uint8_t> code_;
    std::vector<std::optional<std::size_t>> labels_;
    std::vector<std::pair<std::size_t, std::size_t>> fixups_;
};

}  // namespace symx::evm
