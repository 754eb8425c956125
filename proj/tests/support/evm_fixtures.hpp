// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Hand-assembled contracts shared by the tests and the acceptance run.

#include "symx/evm/opcodes.hpp"

#include <cstdint>
#include <vector>

namespace evm_fixtures
{
using symx::evm::Assembler;
namespace op = symx::evm::op;

inline constexpr std::uint32_t kSelectorA = 0xaabbccdd;
inline constexpr std::uint32_t kSelectorB = 0x11223344;

/// Selector dispatch with two arms (each writes its slot) and a reverting fallback.
inline std::vector<std::uint8_t> dispatch()
{
    Assembler a;
    auto fa = a.label(), fb = a.label();
    a.push(0);
    a.op(op::CALLDATALOAD);
    a.push(0xe0);
    a.op(op::SHR);
    a.op(op::DUP1);
    a.push(kSelectorA);
    a.op(op::EQ);
    a.jumpi(fa);
    a.op(op::DUP1);
    a.push(kSelectorB);
    a.op(op::EQ);
    a.jumpi(fb);
    a.push(0);
    a.op(op::DUP1);
    a.op(op::REVERT);
    a.bind(fa);
    a.push(1);
    a.push(0);
    a.op(op::SSTORE);
    a.op(op::STOP);
    a.bind(fb);
    a.push(2);
    a.push(1);
    a.op(op::SSTORE);
    a.op(op::STOP);
    return a.finish();
}

/// storage[0] = 42, then STOP if the first calldata word is non-zero, else REVERT.
inline std::vector<std::uint8_t> store_then_revert()
{
    Assembler a;
    auto keep = a.label();
    a.push(42);
    a.push(0);
    a.op(op::SSTORE);
    a.push(0);
    a.op(op::CALLDATALOAD);
    a.jumpi(keep);
    a.push(0);
    a.op(op::DUP1);
    a.op(op::REVERT);
    a.bind(keep);
    a.op(op::STOP);
    return a.finish();
}

/// storage[0] = calldata[0:32] + calldata[32:64]
inline std::vector<std::uint8_t> add_calldata_words()
{
    Assembler a;
    a.push(0);
    a.op(op::CALLDATALOAD);
    a.push(32);
    a.op(op::CALLDATALOAD);
    a.op(op::ADD);
    a.push(0);
    a.op(op::SSTORE);
    a.op(op::STOP);
    return a.finish();
}

/// storage[0] += 1
inline std::vector<std::uint8_t> counter()
{
    Assembler a;
    a.push(0);
    a.op(op::SLOAD);
    a.push(1);
    a.op(op::ADD);
    a.push(0);
    a.op(op::SSTORE);
    a.op(op::STOP);
    return a.finish();
}

/// Returns the 32-byte word `value` (a plain callee).
inline std::vector<std::uint8_t> return_word(std::uint32_t value)
{
    Assembler a;
    a.push(value);
    a.push(0);
    a.op(op::MSTORE);
    a.push(32);
    a.push(0);
    a.op(op::RETURN);
    return a.finish();
}

/// storage[0] = 7, then REVERT with one byte of output.
inline std::vector<std::uint8_t> store_and_revert()
{
    Assembler a;
    a.push(7);
    a.push(0);
    a.op(op::SSTORE);
    a.push(0x99);
    a.push(0);
    a.op(op::MSTORE8);
    a.push(1);
    a.push(0);
    a.op(op::REVERT);
    return a.finish();
}

/// CALL `target` with `value` wei and no input, then store
/// [success, returndatasize, mem[0:32]] at slots 0, 1, 2.
inline std::vector<std::uint8_t> caller_of(std::uint32_t target, std::uint32_t value)
{
    Assembler a;
    a.push(32);  // ret size
    a.push(0);   // ret offset
    a.push(0);   // args size
    a.push(0);   // args offset
    a.push(value);
    a.push(target);
    a.push(100000);
    a.op(op::CALL);
    a.push(0);
    a.op(op::SSTORE);
    a.op(op::RETURNDATASIZE);
    a.push(1);
    a.op(op::SSTORE);
    a.push(0);
    a.op(op::MLOAD);
    a.push(2);
    a.op(op::SSTORE);
    a.op(op::STOP);
    return a.finish();
}

}  // namespace evm_fixtures
