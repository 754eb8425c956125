// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/evm/analysis.hpp"

#include "symx/error.hpp"
#include "symx/smt/eval.hpp"
#include "symx/smt/simplify.hpp"
#include "symx/smt/solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>

namespace symx::evm
{
namespace
{
std::uint32_t low_bits(const Word& address)
{
    return static_cast<std::uint32_t>(to_u64(address & 0xffffffffu));
}
}  // namespace

Coverage::Coverage(const World& world)
{
    for (const auto& [addr, acct] : world.accounts)
        if (!acct.code->bytes.empty())
            by_low_bits_[low_bits(addr)] =
                Contract{addr, {acct.code->offsets.begin(), acct.code->offsets.end()}, {}};
}

void Coverage::subscribe(engine::EventBus& events)
{
    events.subscribe(engine::EventKind::DidExecuteInstruction, [this](const engine::Event& e) { record(e.location); });
}

void Coverage::record(std::uint64_t location)
{
    const auto pc = static_cast<std::size_t>(location & 0xffffffffu);
    std::lock_guard lock(mutex_);
    auto it = by_low_bits_.find(static_cast<std::uint32_t>(location >> 32));
    if (it != by_low_bits_.end() && it->second.offsets.contains(pc))
        it->second.executed.insert(pc);
}

std::vector<Coverage::Line> Coverage::lines() const
{
    std::lock_guard lock(mutex_);
    std::vector<Line> out;
    for (const auto& [low, c] : by_low_bits_)
        out.push_back({c.address, c.executed.size(), c.offsets.size()});
    return out;
}

Coverage::Line Coverage::aggregate() const
{
    Line total{0, 0, 0};
    for (const auto& l : lines())
    {
        total.executed += l.executed;
        total.total += l.total;
    }
    return total;
}

std::string Coverage::render() const
{
    std::string out;
    char pct[32];
    for (const auto& l : lines())
    {
        std::snprintf(pct, sizeof pct, "%.2f", l.percent());
        out += "0x" + to_hex(l.address, 40) + ", " + std::to_string(l.executed) + ", " + std::to_string(l.total) + ", "
            + pct + "%\n";
    }
    const auto t = aggregate();
    std::snprintf(pct, sizeof pct, "%.2f", t.percent());
    out += "total, " + std::to_string(t.executed) + ", " + std::to_string(t.total) + ", " + pct + "%\n";
    return out;
}

std::set<std::size_t> Coverage::executed(const Word& address) const
{
    std::lock_guard lock(mutex_);
    auto it = by_low_bits_.find(low_bits(address));
    return it == by_low_bits_.end() ? std::set<std::size_t>{} : it->second.executed;
}

OverflowDetector::OverflowDetector(const World& world)
{
    for (const auto& [addr, acct] : world.accounts)
        addresses_[low_bits(addr)] = addr;
}

void OverflowDetector::subscribe(engine::EventBus& events)
{
    events.subscribe(engine::EventKind::DidExecuteInstruction, [this](const engine::Event& e) { inspect(e); });
}

void OverflowDetector::inspect(const engine::Event& e)
{
    const auto* insn = e.instruction;
    if (insn == nullptr || (insn->opcode != op::ADD && insn->opcode != op::MUL) || insn->operands.size() != 2
        || insn->results.size() != 1)
        return;
    const Expr& a = insn->operands[0];
    const Expr& b = insn->operands[1];
    const Expr& r = insn->results[0];
    const Expr zero = Expr::constant(0, 256);
    const Expr wraps = smt::simplify(insn->opcode == op::ADD
            ? smt::ult(r, a)
            : smt::land(smt::ne(a, zero), smt::ne(smt::udiv(r, a), b)));
    if (wraps.is_false())
        return;

    Finding f;
    f.state = e.state.id();
    const auto low = static_cast<std::uint32_t>(e.location >> 32);
    f.address = addresses_.contains(low) ? addresses_.at(low) : Word(low);
    f.pc = static_cast<std::size_t>(e.location & 0xffffffffu);
    f.mnemonic = insn->mnemonic;
    std::vector<Expr> vars;
    for (const auto& in : e.state.inputs())
        vars.push_back(in.variable);
    std::vector<Expr> asked = vars;
    asked.insert(asked.end(), {a, b, r});
    try
    {
        const auto values = e.state.solver().get_values(e.state.constraints(), asked, wraps);
        for (std::size_t i = 0; i < vars.size(); ++i)
            f.witness[vars[i].name()] = values[i];
        f.operands = {values[vars.size()], values[vars.size() + 1]};
        f.result = values[vars.size() + 2];
        f.status = "overflow";
    }
    catch (const NoModel&)
    {
        return;
    }
    catch (const SolverUnknown&)
    {
        f.status = "unknown";
    }
    std::lock_guard lock(mutex_);
    findings_.push_back(std::move(f));
}

std::vector<OverflowDetector::Finding> OverflowDetector::findings() const
{
    std::lock_guard lock(mutex_);
    return findings_;
}

std::string OverflowDetector::render() const
{
    std::string out;
    for (const auto& f : findings())
    {
        nlohmann::ordered_json j;
        j["state"] = f.state;
        j["address"] = "0x" + to_hex(f.address, 40);
        j["pc"] = f.pc;
        j["instruction"] = f.mnemonic;
        j["status"] = f.status;
        if (f.status == "overflow")
        {
            nlohmann::ordered_json w = nlohmann::ordered_json::object();
            for (const auto& [name, v] : f.witness)
                w[name] = "0x" + to_hex(v);
            j["witness"] = w;
            j["operands"] = {"0x" + to_hex(f.operands[0]), "0x" + to_hex(f.operands[1])};
            j["result"] = "0x" + to_hex(f.result);
        }
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace symx::evm
