// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/engine.hpp"
#include "symx/evm/evm.hpp"

#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace symx::evm
{
/// Instruction coverage per contract, fed by did_execute events.
class Coverage
{
public:
    struct Line
    {
        Word address;
        std::size_t executed;
        std::size_t total;
        double percent() const { return total == 0 ? 100.0 : 100.0 * static_cast<double>(executed) / static_cast<double>(total); }
    };

    /// Tracks every account in `world` that has code.
    explicit Coverage(const World& world);
    void subscribe(engine::EventBus& events);

    std::vector<Line> lines() const;
    Line aggregate() const;
    /// "address, executed, total, percent" per contract plus a total line.
    std::string render() const;
    std::set<std::size_t> executed(const Word& address) const;

private:
    struct Contract
    {
        Word address;
        std::set<std::size_t> offsets;
        std::set<std::size_t> executed;
    };

    void record(std::uint64_t location);

    mutable std::mutex mutex_;
    std::map<std::uint32_t, Contract> by_low_bits_;
};

/// Flags ADD/MUL results that can wrap around 2^256.
class OverflowDetector
{
public:
    struct Finding
    {
        std::uint64_t state;
        Word address;
        std::size_t pc;
        std::string mnemonic;
        /// "overflow", or "unknown" when the solver gave up.
        std::string status;
        std::map<std::string, Word> witness;
        /// Operand and result values under the witness.
        std::vector<Word> operands;
        Word result;
    };

    explicit OverflowDetector(const World& world);
    void subscribe(engine::EventBus& events);

    std::vector<Finding> findings() const;
    /// One JSON object per line.
    std::string render() const;

private:
    void inspect(const engine::Event& e);

    std::map<std::uint32_t, Word> addresses_;
    mutable std::mutex mutex_;
    std::vector<Finding> findings_;
};

}  // namespace symx::evm
