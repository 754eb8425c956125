// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/word.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace symx::evm
{
using Digest = std::array<std::uint8_t, 32>;

/// Keccak-256 as used by Ethereum (original 0x01 padding, not SHA3-256).
Digest keccak256(std::span<const std::uint8_t> data);

/// Digest as a big-endian 256-bit word.
Word keccak256_word(std::span<const std::uint8_t> data);

std::string digest_hex(const Digest& d);

}  // namespace symx::evm
