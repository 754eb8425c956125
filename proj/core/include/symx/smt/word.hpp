// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symx
{
/// Unsigned 256-bit machine word. Arithmetic wraps modulo 2^256.
using Word = boost::multiprecision::uint256_t;

inline constexpr unsigned kMaxBitWidth = 256;

/// All-ones mask of the given width (1..256).
Word low_mask(unsigned width);

inline Word truncate(const Word& v, unsigned width)
{
    return width >= kMaxBitWidth ? v : Word(v & low_mask(width));
}

inline bool sign_bit(const Word& v, unsigned width)
{
    return boost::multiprecision::bit_test(v, width - 1);
}

/// Two's complement negation within `width` bits.
inline Word negate(const Word& v, unsigned width)
{
    return truncate(Word(~v) + 1, width);
}

std::uint64_t to_u64(const Word& v);

/// Lower-case hex without prefix, zero padded to `digits` (0 = minimal).
std::string to_hex(const Word& v, unsigned digits = 0);

/// Parses hex digits (optional 0x prefix). Throws std::invalid_argument.
Word from_hex(std::string_view text);

std::string bytes_to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> hex_to_bytes(std::string_view text);

/// Big-endian byte encoding of the low `n` bytes.
std::vector<std::uint8_t> to_big_endian(const Word& v, std::size_t n = 32);
Word from_big_endian(std::span<const std::uint8_t> bytes);

}  // namespace symx
