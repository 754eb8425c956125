// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/native/memory.hpp"

#include "symx/error.hpp"

#include <algorithm>

namespace symx::native
{
using smt::Expr;

std::string perm_string(std::uint8_t perms)
{
    std::string s;
    s += perms & kRead ? 'r' : '-';
    s += perms & kWrite ? 'w' : '-';
    s += perms & kExec ? 'x' : '-';
    return s;
}

std::string_view to_string(MemoryModel m)
{
    return m == MemoryModel::FullySymbolic ? "symbolic" : "concretize";
}

MemoryModel parse_memory_model(std::string_view text)
{
    if (text == "symbolic")
        return MemoryModel::FullySymbolic;
    if (text == "concretize")
        return MemoryModel::ConcretizingAddress;
    throw ParseError("unknown memory model: " + std::string(text));
}

void Memory::map(Region region)
{
    if (region.size == 0)
        throw LoadError("empty region " + region.name);
    for (const auto& r : regions_)
        if (region.base < static_cast<std::uint64_t>(r.base) + r.size && r.base < static_cast<std::uint64_t>(region.base) + region.size)
            throw LoadError("region " + region.name + " overlaps " + r.name);
    if (!region.init)
        region.init = std::make_shared<const std::vector<std::uint8_t>>();
    regions_.push_back(std::move(region));
    std::sort(regions_.begin(), regions_.end(), [](const Region& a, const Region& b) { return a.base < b.base; });
}

const Region* Memory::find(std::uint64_t address, std::uint64_t length, std::uint8_t perms) const
{
    for (const auto& r : regions_)
        if (r.contains(address, length))
            return (r.perms & perms) == perms ? &r : nullptr;
    return nullptr;
}

std::uint8_t Memory::initial_byte(std::uint32_t address) const
{
    for (const auto& r : regions_)
        if (r.contains(address, 1))
        {
            const std::size_t off = address - r.base;
            return off < r.init->size() ? (*r.init)[off] : 0;
        }
    return 0;
}

bool Memory::writable(std::uint32_t address) const
{
    for (const auto& r : regions_)
        if (r.contains(address, 1))
            return (r.perms & kWrite) != 0;
    return true;
}

Expr Memory::read_byte(std::uint32_t address) const
{
    if (array_ && writable(address))
        return smt::select(*array_, Expr::constant(address, 32));
    if (auto it = overlay_.find(address); it != overlay_.end())
        return it->second;
    return Expr::constant(initial_byte(address), 8);
}

void Memory::write_byte(std::uint32_t address, const Expr& value)
{
    if (array_ && writable(address))
        array_ = smt::store(*array_, Expr::constant(address, 32), value);
    else
        overlay_[address] = value;
}

// Only writable memory lives in the array. Read-only bytes never change, so
// keeping them out spares the solver a long STORE chain on every query.
void Memory::materialize()
{
    if (array_)
        return;
    Expr a = Expr::const_array(smt::Sort::array(32, 8), 0);
    for (const auto& r : regions_)
    {
        if ((r.perms & kWrite) == 0)
            continue;
        for (std::size_t i = 0; i < r.init->size(); ++i)
            if ((*r.init)[i] != 0 && !overlay_.contains(r.base + static_cast<std::uint32_t>(i)))
                a = smt::store(a, Expr::constant(r.base + i, 32), Expr::constant((*r.init)[i], 8));
    }
    for (auto it = overlay_.begin(); it != overlay_.end();)
    {
        if (writable(it->first))
        {
            a = smt::store(a, Expr::constant(it->first, 32), it->second);
            it = overlay_.erase(it);
        }
        else
            ++it;
    }
    array_ = a;
}

Expr Memory::read_only_image(Expr& inside, const Expr& address) const
{
    Expr rom = Expr::const_array(smt::Sort::array(32, 8), 0);
    inside = Expr::boolean(false);
    for (const auto& r : regions_)
    {
        if ((r.perms & kWrite) != 0)
            continue;
        inside = smt::lor(inside, smt::land(smt::uge(address, Expr::constant(r.base, 32)),
                                      smt::ule(address, Expr::constant(r.base + (r.size - 1), 32))));
        for (std::size_t i = 0; i < r.init->size(); ++i)
        {
            const auto addr = r.base + static_cast<std::uint32_t>(i);
            if ((*r.init)[i] != 0 && !overlay_.contains(addr))
                rom = smt::store(rom, Expr::constant(addr, 32), Expr::constant((*r.init)[i], 8));
        }
    }
    for (const auto& [addr, value] : overlay_)
        rom = smt::store(rom, Expr::constant(addr, 32), value);
    return rom;
}

Expr Memory::read_byte(const Expr& address)
{
    if (address.is_constant())
        return read_byte(static_cast<std::uint32_t>(address.value()));
    materialize();
    Expr inside;
    const Expr rom = read_only_image(inside, address);
    if (inside.is_false())
        return smt::select(*array_, address);
    return smt::ite(inside, smt::select(rom, address), smt::select(*array_, address));
}

void Memory::write_byte(const Expr& address, const Expr& value)
{
    if (address.is_constant())
        return write_byte(static_cast<std::uint32_t>(address.value()), value);
    // Callers guard symbolic writes to writable regions.
    materialize();
    array_ = smt::store(*array_, address, value);
}

Expr Memory::read(std::uint32_t address, unsigned size) const
{
    Expr v = read_byte(address);
    for (unsigned i = 1; i < size; ++i)
        v = smt::concat(read_byte(address + i), v);
    return v;
}

void Memory::write(std::uint32_t address, const Expr& value, unsigned size)
{
    for (unsigned i = 0; i < size; ++i)
        write_byte(address + i, smt::extract(8 * i + 7, 8 * i, value));
}

Expr Memory::read(const Expr& address, unsigned size)
{
    Expr v = read_byte(address);
    for (unsigned i = 1; i < size; ++i)
        v = smt::concat(read_byte(smt::add(address, Expr::constant(i, 32))), v);
    return v;
}

void Memory::write(const Expr& address, const Expr& value, unsigned size)
{
    for (unsigned i = 0; i < size; ++i)
        write_byte(smt::add(address, Expr::constant(i, 32)), smt::extract(8 * i + 7, 8 * i, value));
}

Expr Memory::guard(const Expr& address, unsigned size, std::uint8_t perms) const
{
    Expr any = Expr::boolean(false);
    for (const auto& r : regions_)
    {
        if ((r.perms & perms) != perms || r.size < size)
            continue;
        const std::uint32_t last = r.base + (r.size - size);
        any = smt::lor(any, smt::land(smt::uge(address, Expr::constant(r.base, 32)), smt::ule(address, Expr::constant(last, 32))));
    }
    return any;
}

void Memory::serialize(engine::BlobWriter& out) const
{
    out.u32(static_cast<std::uint32_t>(regions_.size()));
    for (const auto& r : regions_)
    {
        out.u32(r.base);
        out.u32(r.size);
        out.u8(r.perms);
        out.string(r.name);
        out.bytes(*r.init);
    }
    out.u32(static_cast<std::uint32_t>(overlay_.size()));
    for (const auto& [addr, value] : overlay_)
    {
        out.u32(addr);
        out.expr(value);
    }
    out.boolean(array_.has_value());
    if (array_)
        out.expr(*array_);
}

Memory Memory::deserialize(engine::BlobReader& in)
{
    Memory m;
    for (auto n = in.u32(); n > 0; --n)
    {
        Region r;
        r.base = in.u32();
        r.size = in.u32();
        r.perms = in.u8();
        r.name = in.string();
        r.init = std::make_shared<const std::vector<std::uint8_t>>(in.bytes());
        m.regions_.push_back(std::move(r));
    }
    for (auto n = in.u32(); n > 0; --n)
    {
        const auto addr = in.u32();
        m.overlay_.emplace(addr, in.expr());
    }
    if (in.boolean())
        m.array_ = in.expr();
    return m;
}

}  // namespace symx::native
