// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/engine/blob.hpp"

#include "symx/error.hpp"

namespace symx::engine
{
namespace
{
enum Record : std::uint8_t
{
    kRef = 0,
    kConstant = 1,
    kVariable = 2,
    kOperation = 3,
};
}  // namespace

void BlobWriter::u32(std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        u8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void BlobWriter::u64(std::uint64_t v)
{
    for (int i = 0; i < 8; ++i)
        u8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void BlobWriter::word(const Word& v)
{
    for (auto b : to_big_endian(v, 32))
        u8(b);
}

void BlobWriter::string(std::string_view s)
{
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
}

void BlobWriter::bytes(const std::vector<std::uint8_t>& b)
{
    u32(static_cast<std::uint32_t>(b.size()));
    out_.append(reinterpret_cast<const char*>(b.data()), b.size());
}

void BlobWriter::sort(const smt::Sort& s)
{
    u8(static_cast<std::uint8_t>(s.kind()));
    u32(s.index_width());
    u32(s.is_array() ? s.value_width() : 0);
}

void BlobWriter::expr(const smt::Expr& root)
{
    // Post-order emission of nodes not yet in the table, then a reference.
    std::vector<std::pair<smt::Expr, bool>> work{{root, false}};
    while (!work.empty())
    {
        auto [e, expanded] = work.back();
        work.pop_back();
        if (table_.contains(e.id()))
            continue;
        if (e.is_operation() && !expanded)
        {
            work.emplace_back(e, true);
            for (const auto& o : e.operands())
                if (!table_.contains(o.id()))
                    work.emplace_back(o, false);
            continue;
        }
        switch (e.kind())
        {
        case smt::Expr::Kind::Constant:
            u8(kConstant);
            sort(e.sort());
            word(e.value());
            break;
        case smt::Expr::Kind::Variable:
            u8(kVariable);
            sort(e.sort());
            string(e.name());
            break;
        case smt::Expr::Kind::Operation:
            u8(kOperation);
            u8(static_cast<std::uint8_t>(e.op()));
            u32(e.param(0));
            u32(e.param(1));
            u8(static_cast<std::uint8_t>(e.operands().size()));
            for (const auto& o : e.operands())
                u32(table_.at(o.id()));
            break;
        }
        const auto index = static_cast<std::uint32_t>(table_.size());
        table_.emplace(e.id(), index);
    }
    u8(kRef);
    u32(table_.at(root.id()));
}

std::string_view BlobReader::take(std::size_t n)
{
    if (data_.size() - pos_ < n)
        throw Error("truncated state blob");
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
}

std::uint8_t BlobReader::u8()
{
    return static_cast<std::uint8_t>(take(1)[0]);
}

std::uint32_t BlobReader::u32()
{
    const auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
        v = (v << 8) | static_cast<std::uint8_t>(s[static_cast<std::size_t>(i)]);
    return v;
}

std::uint64_t BlobReader::u64()
{
    const auto s = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | static_cast<std::uint8_t>(s[static_cast<std::size_t>(i)]);
    return v;
}

Word BlobReader::word()
{
    const auto s = take(32);
    return from_big_endian(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

std::string BlobReader::string()
{
    return std::string(take(u32()));
}

std::vector<std::uint8_t> BlobReader::bytes()
{
    const auto s = take(u32());
    return {s.begin(), s.end()};
}

smt::Sort BlobReader::sort()
{
    const auto kind = static_cast<smt::Sort::Kind>(u8());
    const unsigned a = u32();
    const unsigned b = u32();
    switch (kind)
    {
    case smt::Sort::Kind::Bool:
        return smt::Sort::boolean();
    case smt::Sort::Kind::BitVec:
        return smt::Sort::bitvec(a);
    case smt::Sort::Kind::Array:
        return smt::Sort::array(a, b);
    }
    throw Error("bad sort in state blob");
}

smt::Expr BlobReader::expr()
{
    for (;;)
    {
        const auto tag = u8();
        switch (tag)
        {
        case kRef: {
            const auto i = u32();
            if (i >= table_.size())
                throw Error("dangling expression reference in state blob");
            return table_[i];
        }
        case kConstant: {
            const auto s = sort();
            const Word v = word();
            if (s.is_bool())
                table_.push_back(smt::Expr::boolean(v != 0));
            else if (s.is_array())
                table_.push_back(smt::Expr::const_array(s, v));
            else
                table_.push_back(smt::Expr::constant(v, s.width()));
            break;
        }
        case kVariable: {
            const auto s = sort();
            table_.push_back(smt::Expr::variable(string(), s));
            break;
        }
        case kOperation: {
            const auto op = static_cast<smt::Op>(u8());
            std::array<unsigned, 2> params{u32(), u32()};
            const auto n = u8();
            std::vector<smt::Expr> xs;
            for (unsigned k = 0; k < n; ++k)
            {
                const auto i = u32();
                if (i >= table_.size())
                    throw Error("dangling expression reference in state blob");
                xs.push_back(table_[i]);
            }
            table_.push_back(smt::Expr::raw(op, std::move(xs), params));
            break;
        }
        default:
            throw Error("bad expression record in state blob");
        }
    }
}

}  // namespace symx::engine
