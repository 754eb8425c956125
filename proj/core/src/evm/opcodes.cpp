// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/evm/opcodes.hpp"

#include "symx/error.hpp"

#include <array>
#include <cctype>
#include <stdexcept>

namespace symx::evm
{
namespace
{
// Gas classes of the simplified schedule.
constexpr std::uint32_t kFast = 3;
constexpr std::uint32_t kBase = 1;

std::array<std::optional<OpInfo>, 256> build_table()
{
    std::array<std::optional<OpInfo>, 256> t{};
    auto set = [&](std::uint8_t code, std::string_view name, std::uint8_t pops, std::uint8_t pushes, std::uint32_t gas) {
        t[code] = OpInfo{name, pops, pushes, gas};
    };
    set(op::STOP, "STOP", 0, 0, kBase);
    set(op::ADD, "ADD", 2, 1, kFast);
    set(op::MUL, "MUL", 2, 1, kFast);
    set(op::SUB, "SUB", 2, 1, kFast);
    set(op::DIV, "DIV", 2, 1, kFast);
    set(op::SDIV, "SDIV", 2, 1, kFast);
    set(op::MOD, "MOD", 2, 1, kFast);
    set(op::SMOD, "SMOD", 2, 1, kFast);
    set(op::LT, "LT", 2, 1, kFast);
    set(op::GT, "GT", 2, 1, kFast);
    set(op::SLT, "SLT", 2, 1, kFast);
    set(op::SGT, "SGT", 2, 1, kFast);
    set(op::EQ, "EQ", 2, 1, kFast);
    set(op::ISZERO, "ISZERO", 1, 1, kFast);
    set(op::AND, "AND", 2, 1, kFast);
    set(op::OR, "OR", 2, 1, kFast);
    set(op::XOR, "XOR", 2, 1, kFast);
    set(op::NOT, "NOT", 1, 1, kFast);
    set(op::BYTE, "BYTE", 2, 1, kFast);
    set(op::SHL, "SHL", 2, 1, kFast);
    set(op::SHR, "SHR", 2, 1, kFast);
    set(op::SAR, "SAR", 2, 1, kFast);
    set(op::SHA3, "SHA3", 2, 1, 30);
    set(op::ADDRESS, "ADDRESS", 0, 1, kBase);
    set(op::BALANCE, "BALANCE", 1, 1, kBase);
    set(op::CALLER, "CALLER", 0, 1, kBase);
    set(op::CALLVALUE, "CALLVALUE", 0, 1, kBase);
    set(op::CALLDATALOAD, "CALLDATALOAD", 1, 1, kBase);
    set(op::CALLDATASIZE, "CALLDATASIZE", 0, 1, kBase);
    set(op::CALLDATACOPY, "CALLDATACOPY", 3, 0, kBase);
    set(op::CODESIZE, "CODESIZE", 0, 1, kBase);
    set(op::CODECOPY, "CODECOPY", 3, 0, kBase);
    set(op::RETURNDATASIZE, "RETURNDATASIZE", 0, 1, kBase);
    set(op::RETURNDATACOPY, "RETURNDATACOPY", 3, 0, kBase);
    set(op::POP, "POP", 1, 0, kFast);
    set(op::MLOAD, "MLOAD", 1, 1, kBase);
    set(op::MSTORE, "MSTORE", 2, 0, kBase);
    set(op::MSTORE8, "MSTORE8", 2, 0, kBase);
    set(op::SLOAD, "SLOAD", 1, 1, 200);
    set(op::SSTORE, "SSTORE", 2, 0, 5000);
    set(op::JUMP, "JUMP", 1, 0, kBase);
    set(op::JUMPI, "JUMPI", 2, 0, kBase);
    set(op::PC, "PC", 0, 1, kBase);
    set(op::MSIZE, "MSIZE", 0, 1, kBase);
    set(op::GAS, "GAS", 0, 1, kBase);
    set(op::JUMPDEST, "JUMPDEST", 0, 0, kBase);
    static const std::array<std::string, 32> push_names = [] {
        std::array<std::string, 32> n;
        for (int i = 0; i < 32; ++i)
            n[i] = "PUSH" + std::to_string(i + 1);
        return n;
    }();
    static const std::array<std::string, 16> dup_names = [] {
        std::array<std::string, 16> n;
        for (int i = 0; i < 16; ++i)
            n[i] = "DUP" + std::to_string(i + 1);
        return n;
    }();
    static const std::array<std::string, 16> swap_names = [] {
        std::array<std::string, 16> n;
        for (int i = 0; i < 16; ++i)
            n[i] = "SWAP" + std::to_string(i + 1);
        return n;
    }();
    for (int i = 0; i < 32; ++i)
        set(static_cast<std::uint8_t>(op::PUSH1 + i), push_names[i], 0, 1, kFast);
    for (int i = 0; i < 16; ++i)
    {
        set(static_cast<std::uint8_t>(op::DUP1 + i), dup_names[i], static_cast<std::uint8_t>(i + 1),
            static_cast<std::uint8_t>(i + 2), kFast);
        set(static_cast<std::uint8_t>(op::SWAP1 + i), swap_names[i], static_cast<std::uint8_t>(i + 2),
            static_cast<std::uint8_t>(i + 2), kFast);
    }
    set(op::CALL, "CALL", 7, 1, 700);
    set(op::RETURN, "RETURN", 2, 0, kBase);
    set(op::REVERT, "REVERT", 2, 0, kBase);
    return t;
}

const std::array<std::optional<OpInfo>, 256>& table()
{
    static const auto t = build_table();
    return t;
}
}  // namespace

const OpInfo* op_info(std::uint8_t opcode)
{
    const auto& e = table()[opcode];
    return e ? &*e : nullptr;
}

unsigned immediate_size(std::uint8_t opcode)
{
    return opcode >= op::PUSH1 && opcode <= op::PUSH32 ? opcode - op::PUSH1 + 1u : 0u;
}

std::vector<std::size_t> instruction_offsets(std::span<const std::uint8_t> code)
{
    std::vector<std::size_t> out;
    for (std::size_t pc = 0; pc < code.size(); pc += 1 + immediate_size(code[pc]))
        out.push_back(pc);
    return out;
}

std::set<std::size_t> jump_destinations(std::span<const std::uint8_t> code)
{
    std::set<std::size_t> out;
    for (auto pc : instruction_offsets(code))
        if (code[pc] == op::JUMPDEST)
            out.insert(pc);
    return out;
}

std::vector<std::uint8_t> parse_hex(std::string_view text)
{
    std::string digits;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            digits.push_back(c);
    if (digits.starts_with("0x") || digits.starts_with("0X"))
        digits.erase(0, 2);
    if (digits.size() % 2 != 0)
        throw ParseError("odd number of hex digits");
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9')
            return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f')
            return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F')
            return static_cast<std::uint8_t>(c - 'A' + 10);
        throw ParseError(std::string("invalid hex digit '") + c + "'");
    };
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < digits.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(nibble(digits[i]) << 4 | nibble(digits[i + 1])));
    return out;
}

std::string hex_string(std::span<const std::uint8_t> bytes)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    for (auto b : bytes)
    {
        s.push_back(kDigits[b >> 4]);
        s.push_back(kDigits[b & 15]);
    }
    return s;
}

Assembler::Label Assembler::label()
{
    labels_.emplace_back();
    return Label{labels_.size() - 1};
}

void Assembler::bind(Label l)
{
    labels_.at(l.id) = code_.size();
    code_.push_back(op::JUMPDEST);
}

void Assembler::op(std::uint8_t opcode)
{
    code_.push_back(opcode);
}

void Assembler::push(const Word& value)
{
    std::vector<std::uint8_t> bytes;
    for (Word v = value; v != 0; v >>= 8)
        bytes.insert(bytes.begin(), static_cast<std::uint8_t>(v & 0xff));
    if (bytes.empty())
        bytes.push_back(0);
    push_bytes(bytes);
}

void Assembler::push_bytes(std::span<const std::uint8_t> bytes)
{
    if (bytes.empty() || bytes.size() > 32)
        throw std::logic_error("PUSH takes 1 to 32 bytes");
    code_.push_back(static_cast<std::uint8_t>(op::PUSH1 + bytes.size() - 1));
    code_.insert(code_.end(), bytes.begin(), bytes.end());
}

void Assembler::push_label(Label l)
{
    code_.push_back(op::PUSH1 + 1);
    fixups_.emplace_back(code_.size(), l.id);
    code_.push_back(0);
    code_.push_back(0);
}

void Assembler::jump(Label l)
{
    push_label(l);
    op(op::JUMP);
}

void Assembler::jumpi(Label l)
{
    push_label(l);
    op(op::JUMPI);
}

std::vector<std::uint8_t> Assembler::finish() const
{
    auto out = code_;
    for (const auto& [at, id] : fixups_)
    {
        const auto& target = labels_.at(id);
        if (!target)
            throw std::logic_error("unbound label");
        out[at] = static_cast<std::uint8_t>(*target >> 8);
        out[at + 1] = static_cast<std::uint8_t>(*target);
    }
    return out;
}

}  // namespace symx::evm
