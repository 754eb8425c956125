// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/smt/word.hpp"

#include <array>
#include <stdexcept>

namespace symx
{
namespace
{
const std::array<Word, kMaxBitWidth + 1>& mask_table()
{
    static const auto table = [] {
        std::array<Word, kMaxBitWidth + 1> t{};
        for (unsigned w = 1; w < kMaxBitWidth; ++w)
            t[w] = (Word(1) << w) - 1;
        t[kMaxBitWidth] = ~Word(0);
        return t;
    }();
    return table;
}

int hex_digit(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::string_view strip_prefix(std::string_view text)
{
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
        text.remove_prefix(2);
    return text;
}
}  // namespace

Word low_mask(unsigned width)
{
    if (width == 0 || width > kMaxBitWidth)
        throw std::out_of_range("bit width out of range: " + std::to_string(width));
    return mask_table()[width];
}

std::uint64_t to_u64(const Word& v)
{
    return static_cast<std::uint64_t>(v & Word(0xFFFFFFFFFFFFFFFFull));
}

std::string to_hex(const Word& v, unsigned digits)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    Word x = v;
    while (x != 0)
    {
        out.push_back(kDigits[static_cast<unsigned>(x & 0xF)]);
        x >>= 4;
    }
    while (out.size() < digits || out.empty())
        out.push_back('0');
    return {out.rbegin(), out.rend()};
}

Word from_hex(std::string_view text)
{
    text = strip_prefix(text);
    if (text.empty() || text.size() > 64)
        throw std::invalid_argument("malformed hex word");
    Word v = 0;
    for (char c : text)
    {
        const int d = hex_digit(c);
        if (d < 0)
            throw std::invalid_argument("malformed hex word");
        v = (v << 4) | d;
    }
    return v;
}

std::string bytes_to_hex(std::span<const std::uint8_t> bytes)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes)
    {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> hex_to_bytes(std::string_view text)
{
    std::string digits;
    for (char c : strip_prefix(text))
    {
        if (c == ' ' || c == '\n' || c == '\r' || c == '\t')
            continue;
        if (hex_digit(c) < 0)
            throw std::invalid_argument("malformed hex string");
        digits.push_back(c);
    }
    if (digits.size() % 2 != 0)
        throw std::invalid_argument("hex string has odd length");
    std::vector<std::uint8_t> out(digits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(hex_digit(digits[2 * i]) * 16 + hex_digit(digits[2 * i + 1]));
    return out;
}

std::vector<std::uint8_t> to_big_endian(const Word& v, std::size_t n)
{
    std::vector<std::uint8_t> out(n);
    Word x = v;
    for (std::size_t i = 0; i < n; ++i)
    {
        out[n - 1 - i] = static_cast<std::uint8_t>(x & 0xFF);
        x >>= 8;
    }
    return out;
}

Word from_big_endian(std::span<const std::uint8_t> bytes)
{
    Word v = 0;
    for (auto b : bytes)
        v = (v << 8) | b;
    return v;
}

}  // namespace symx
