// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Straight-from-the-definition Keccak-256 for cross-checking the library.
// Round constants come from the LFSR and rotation offsets from the (x, y)
// walk, so no table is shared with the implementation under test.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace keccak_ref
{
inline bool rc_bit(int t)
{
    if (t % 255 == 0)
        return true;
    std::uint8_t r = 1;  // bits r0..r7, r0 in the low bit
    for (int i = 1; i <= t % 255; ++i)
    {
        const bool r8 = (r >> 7) & 1;
        r = static_cast<std::uint8_t>(r << 1);
        if (r8)
            r ^= 0x71;  // taps at positions 0, 4, 5, 6
    }
    return r & 1;
}

inline std::uint64_t rot(std::uint64_t v, int n)
{
    n %= 64;
    return n == 0 ? v : (v << n) | (v >> (64 - n));
}

inline void keccak_f(std::uint64_t a[5][5])
{
    int offset[5][5] = {};
    for (int x = 1, y = 0, t = 0; t < 24; ++t)
    {
        offset[x][y] = (t + 1) * (t + 2) / 2;
        const int nx = y;
        const int ny = (2 * x + 3 * y) % 5;
        x = nx;
        y = ny;
    }
    for (int round = 0; round < 24; ++round)
    {
        std::uint64_t c[5], d[5], b[5][5];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x][0] ^ a[x][1] ^ a[x][2] ^ a[x][3] ^ a[x][4];
        for (int x = 0; x < 5; ++x)
            d[x] = c[(x + 4) % 5] ^ rot(c[(x + 1) % 5], 1);
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                a[x][y] ^= d[x];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y][(2 * x + 3 * y) % 5] = rot(a[x][y], offset[x][y]);
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                a[x][y] = b[x][y] ^ (~b[(x + 1) % 5][y] & b[(x + 2) % 5][y]);
        std::uint64_t rc = 0;
        for (int j = 0; j <= 6; ++j)
            if (rc_bit(j + 7 * round))
                rc |= std::uint64_t{1} << ((1 << j) - 1);
        a[0][0] ^= rc;
    }
}

inline std::string hex256(const std::vector<std::uint8_t>& msg)
{
    constexpr std::size_t rate = 136;
    std::vector<std::uint8_t> m = msg;
    m.push_back(0x01);
    while (m.size() % rate != 0)
        m.push_back(0);
    m.back() |= 0x80;
    std::uint64_t a[5][5] = {};
    for (std::size_t block = 0; block < m.size(); block += rate)
    {
        for (std::size_t i = 0; i < rate / 8; ++i)
        {
            std::uint64_t lane = 0;
            for (int k = 0; k < 8; ++k)
                lane |= std::uint64_t{m[block + 8 * i + k]} << (8 * k);
            a[i % 5][i / 5] ^= lane;
        }
        keccak_f(a);
    }
    std::string out;
    const char* digits = "0123456789abcdef";
    for (std::size_t i = 0; i < 32; ++i)
    {
        const auto byte = static_cast<std::uint8_t>(a[(i / 8) % 5][(i / 8) / 5] >> (8 * (i % 8)));
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 15]);
    }
    return out;
}
}  // namespace keccak_ref
