// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/blob.hpp"
#include "symx/smt/expr.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symx::native
{
enum Perm : std::uint8_t
{
    kRead = 1,
    kWrite = 2,
    kExec = 4,
};

std::string perm_string(std::uint8_t perms);

enum class MemoryModel : std::uint8_t
{
    /// Symbolic addresses become SELECT/STORE over one array, guarded to
    /// mapped memory.
    FullySymbolic,
    /// Symbolic addresses are enumerated; each value gets its own state.
    ConcretizingAddress,
};

std::string_view to_string(MemoryModel m);
/// "symbolic" or "concretize"; throws ParseError.
MemoryModel parse_memory_model(std::string_view text);

struct Region
{
    std::uint32_t base = 0;
    std::uint32_t size = 0;
    std::uint8_t perms = 0;
    std::string name;
    /// Initial contents; bytes past its end are zero.
    std::shared_ptr<const std::vector<std::uint8_t>> init;

    bool contains(std::uint64_t address, std::uint64_t length) const
    {
        return address >= base && address + length <= static_cast<std::uint64_t>(base) + size;
    }
};

/// Byte-addressed 32-bit address space. Concrete accesses go to a sparse
/// overlay; the first symbolic access folds everything into an
/// Array(32 -> 8) term that stays authoritative afterwards.
class Memory
{
public:
    void map(Region region);
    const std::vector<Region>& regions() const noexcept { return regions_; }

    /// Region holding [address, address+length) with all of `perms`.
    const Region* find(std::uint64_t address, std::uint64_t length, std::uint8_t perms) const;

    /// Unchecked byte access (permissions are the caller's job).
    smt::Expr read_byte(std::uint32_t address) const;
    void write_byte(std::uint32_t address, const smt::Expr& value);

    smt::Expr read_byte(const smt::Expr& address);
    void write_byte(const smt::Expr& address, const smt::Expr& value);

    /// Little-endian multi-byte access.
    smt::Expr read(std::uint32_t address, unsigned size) const;
    void write(std::uint32_t address, const smt::Expr& value, unsigned size);
    smt::Expr read(const smt::Expr& address, unsigned size);
    void write(const smt::Expr& address, const smt::Expr& value, unsigned size);

    /// Bool: [address, address+size) lies in some region with `perms`.
    smt::Expr guard(const smt::Expr& address, unsigned size, std::uint8_t perms) const;

    bool symbolic() const noexcept { return array_.has_value(); }

    void serialize(engine::BlobWriter& out) const;
    static Memory deserialize(engine::BlobReader& in);

private:
    void materialize();
    bool writable(std::uint32_t address) const;
    /// Array of every read-only byte; `inside` is set to the read-only ranges test.
    smt::Expr read_only_image(smt::Expr& inside, const smt::Expr& address) const;
    std::uint8_t initial_byte(std::uint32_t address) const;

    std::vector<Region> regions_;
    std::map<std::uint32_t, smt::Expr> overlay_;
    std::optional<smt::Expr> array_;
};

}  // namespace symx::native
