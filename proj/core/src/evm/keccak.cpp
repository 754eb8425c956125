// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/evm/keccak.hpp"

#include <bit>

namespace symx::evm
{
namespace
{
constexpr std::array<std::uint64_t, 24> kRoundConstants{0x0000000000000001ULL, 0x0000000000008082ULL,
    0x800000000000808aULL, 0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL,
    0x8000000000008009ULL, 0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL, 0x8000000000008002ULL,
    0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL, 0x8000000000008080ULL,
    0x0000000080000001ULL, 0x8000000080008008ULL};

// Rotation and destination lane for the combined rho-pi step.
constexpr std::array<int, 24> kRho{1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44};
constexpr std::array<int, 24> kPi{10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1};

constexpr std::size_t kRate = 136;

void permute(std::array<std::uint64_t, 25>& s)
{
    for (auto rc : kRoundConstants)
    {
        std::array<std::uint64_t, 5> c{};
        for (int x = 0; x < 5; ++x)
            c[x] = s[x] ^ s[x + 5] ^ s[x + 10] ^ s[x + 15] ^ s[x + 20];
        for (int x = 0; x < 5; ++x)
        {
            const std::uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5)
                s[y + x] ^= d;
        }
        std::uint64_t t = s[1];
        for (int i = 0; i < 24; ++i)
        {
            const std::uint64_t next = s[kPi[i]];
            s[kPi[i]] = std::rotl(t, kRho[i]);
            t = next;
        }
        for (int y = 0; y < 25; y += 5)
        {
            std::array<std::uint64_t, 5> row{};
            for (int x = 0; x < 5; ++x)
                row[x] = s[y + x];
            for (int x = 0; x < 5; ++x)
                s[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
        }
        s[0] ^= rc;
    }
}

void absorb_block(std::array<std::uint64_t, 25>& s, const std::uint8_t* block)
{
    for (std::size_t i = 0; i < kRate / 8; ++i)
    {
        std::uint64_t lane = 0;
        for (int b = 7; b >= 0; --b)
            lane = (lane << 8) | block[8 * i + b];
        s[i] ^= lane;
    }
    permute(s);
}
}  // namespace

Digest keccak256(std::span<const std::uint8_t> data)
{
    std::array<std::uint64_t, 25> s{};
    std::size_t off = 0;
    for (; data.size() - off >= kRate; off += kRate)
        absorb_block(s, data.data() + off);
    std::array<std::uint8_t, kRate> last{};
    std::copy(data.begin() + static_cast<std::ptrdiff_t>(off), data.end(), last.begin());
    last[data.size() - off] ^= 0x01;
    last[kRate - 1] ^= 0x80;
    absorb_block(s, last.data());

    Digest out{};
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(s[i / 8] >> (8 * (i % 8)));
    return out;
}

Word keccak256_word(std::span<const std::uint8_t> data)
{
    Word w = 0;
    for (auto b : keccak256(data))
        w = (w << 8) | b;
    return w;
}

std::string digest_hex(const Digest& d)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    for (auto b : d)
    {
        s.push_back(kDigits[b >> 4]);
        s.push_back(kDigits[b & 15]);
    }
    return s;
}

}  // namespace symx::evm
