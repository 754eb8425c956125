// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/engine.hpp"
#include "symx/engine/platform.hpp"
#include "symx/evm/opcodes.hpp"
#include "symx/smt/expr.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

namespace symx::evm
{
using smt::Expr;

inline constexpr std::size_t kMaxStack = 1024;
inline constexpr std::size_t kMaxCallDepth = 64;
inline constexpr std::uint64_t kDefaultGas = 10'000'000;
/// Memory accesses ending past this offset run out of gas.
inline constexpr std::uint64_t kMemoryLimit = 1u << 20;

/// The externally owned account that sends every transaction.
const Word& caller_address();
Word address_mask();

/// Immutable bytecode with its precomputed jump table.
struct Code
{
    std::vector<std::uint8_t> bytes;
    std::set<std::size_t> jumpdests;
    std::vector<std::size_t> offsets;

    static std::shared_ptr<const Code> make(std::vector<std::uint8_t> bytes);
};

struct Account
{
    Expr balance;
    std::shared_ptr<const Code> code;
    /// Array(256 -> 256); starts all-zero.
    Expr storage;
    std::uint64_t nonce = 0;
};

struct Sha3Pair
{
    std::vector<std::uint8_t> preimage;
    Word digest;
};

class World
{
public:
    std::map<Word, Account> accounts;
    std::vector<Sha3Pair> sha3_pairs;
    std::size_t tx_count = 0;

    /// Fresh world holding only the transaction caller (balance 2^255).
    static World with_caller();

    /// Next sequential address unless `address` forces one; a taken forced
    /// address throws Error.
    Word create_account(const Expr& balance, std::optional<Word> address = std::nullopt);
    Word create_account(const Word& balance, std::optional<Word> address = std::nullopt);
    Word create_contract(std::vector<std::uint8_t> code, const Word& balance = 0,
        std::optional<Word> address = std::nullopt);

    Account* find(const Word& address);
    const Account* find(const Word& address) const;
    /// Balance as an ITE over the known accounts (0 for unknown addresses).
    Expr balance_of(const Expr& address) const;

    void serialize(engine::BlobWriter& out) const;
    static World deserialize(engine::BlobReader& in);

private:
    Word next_address_ = 1;
};

/// Byte-addressed memory with concrete offsets and a 32-byte watermark.
class Memory
{
public:
    Expr read_byte(std::uint64_t offset) const;
    void write_byte(std::uint64_t offset, const Expr& value);
    /// Big-endian word of `size` bytes (size*8 bits).
    Expr read(std::uint64_t offset, std::size_t size) const;
    std::vector<Expr> slice(std::uint64_t offset, std::size_t size) const;
    void touch(std::uint64_t offset, std::uint64_t size);
    std::uint64_t size() const noexcept { return watermark_; }

    void serialize(engine::BlobWriter& out) const;
    static Memory deserialize(engine::BlobReader& in);

private:
    std::map<std::uint64_t, Expr> bytes_;
    std::uint64_t watermark_ = 0;
};

struct Frame
{
    Word address;
    Word caller;
    Expr value;
    std::vector<Expr> calldata;
    std::shared_ptr<const Code> code;
    std::size_t pc = 0;
    std::vector<Expr> stack;
    Memory memory;
    /// Output of the most recent completed call from this frame.
    std::vector<Expr> returndata;
    /// World before this call's value transfer.
    World snapshot;
    /// Where the pending sub-call's output goes.
    std::uint64_t ret_offset = 0;
    std::uint64_t ret_size = 0;
};

struct Transaction
{
    Word caller;
    Word target;
    Expr value;
    std::vector<Expr> data;
    bool symbolic = true;
};

class EVMContext final : public engine::PlatformContext
{
public:
    World world;
    std::vector<Frame> frames;
    std::uint64_t gas = 0;
    /// The running transaction terminates the state instead of suspending it.
    bool final_transaction = true;
    std::vector<Transaction> transactions;
    /// Output of the last top-level call.
    std::vector<Expr> output;

    std::unique_ptr<engine::PlatformContext> clone() const override;
    void serialize(engine::BlobWriter& out) const override;
    static std::unique_ptr<EVMContext> deserialize(engine::BlobReader& in);
};

class EVM final : public engine::Platform
{
public:
    std::string_view tag() const override { return "evm"; }
    std::uint64_t location(const engine::State& state) const override;
    engine::StepResult step(engine::State& state, engine::StepEnv& env) const override;
    engine::TestcaseFiles render_testcase(const engine::State& state, const engine::Model& model) const override;
    std::unique_ptr<engine::PlatformContext> deserialize_context(engine::BlobReader& in) const override;
};

/// (low 32 bits of address) << 32 | pc
std::uint64_t make_location(const Word& address, std::size_t pc);

/// Queues an idle state holding `world`.
engine::State& add_world(engine::Engine& engine, World world);

/// Starts a transaction on one idle state. The value must not exceed the
/// caller's balance; that is asserted as a constraint.
void begin_transaction(engine::State& state, Transaction tx, std::uint64_t gas, bool final_transaction);

/// Starts a fresh symbolic transaction on every Ready state and returns how
/// many were started.
std::size_t apply_symbolic_transaction(engine::Engine& engine, const Word& target, std::size_t data_size,
    std::uint64_t gas = kDefaultGas, bool final_transaction = true);

/// Runs `count` symbolic transactions against `target`, exploring to
/// completion after each. Only the last one terminates its states.
const engine::Report& explore_transactions(engine::Engine& engine, const Word& target, std::size_t count,
    std::size_t data_size, std::uint64_t gas = kDefaultGas);

}  // namespace symx::evm
