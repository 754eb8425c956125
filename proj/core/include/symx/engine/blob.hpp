// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/smt/expr.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace symx::engine
{
/// Append-only binary encoder. Expressions are written as a shared node
/// table, so a DAG referenced from many places is stored once per blob.
class BlobWriter
{
public:
    void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void boolean(bool v) { u8(v ? 1 : 0); }
    void word(const Word& v);
    void string(std::string_view s);
    void bytes(const std::vector<std::uint8_t>& b);
    void sort(const smt::Sort& s);
    void expr(const smt::Expr& e);

    const std::string& data() const noexcept { return out_; }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
    std::unordered_map<const smt::Node*, std::uint32_t> table_;
};

class BlobReader
{
public:
    explicit BlobReader(std::string_view data) : data_{data} {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    bool boolean() { return u8() != 0; }
    Word word();
    std::string string();
    std::vector<std::uint8_t> bytes();
    smt::Sort sort();
    smt::Expr expr();

    bool done() const noexcept { return pos_ == data_.size(); }

private:
    std::string_view take(std::size_t n);

    std::string_view data_;
    std::size_t pos_ = 0;
    std::vector<smt::Expr> table_;
};

}  // namespace symx::engine
