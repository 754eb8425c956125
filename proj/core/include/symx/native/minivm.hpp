// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/engine.hpp"
#include "symx/engine/platform.hpp"
#include "symx/native/isa.hpp"
#include "symx/native/memory.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace symx::native
{
/// One input byte: a concrete value, or nullopt for a fresh symbol.
using ByteSpec = std::optional<std::uint8_t>;

/// Every '+' becomes a symbolic byte; other characters are literal.
std::vector<ByteSpec> parse_byte_spec(std::string_view text);
std::vector<ByteSpec> concrete_bytes(std::span<const std::uint8_t> bytes);
std::vector<ByteSpec> symbolic_bytes(std::size_t n);

struct Program
{
    std::vector<std::uint8_t> image;
    std::vector<ByteSpec> stdin_spec;
    /// argv[0] first. Strings are NUL-terminated in memory.
    std::vector<std::vector<ByteSpec>> argv;
};

struct MiniOS
{
    std::vector<smt::Expr> stdin_bytes;
    std::size_t stdin_cursor = 0;
    std::vector<smt::Expr> stdout_bytes;
    std::optional<std::uint32_t> exit_code;
};

class MiniVMContext final : public engine::PlatformContext
{
public:
    std::array<smt::Expr, kRegisterCount> regs;
    std::uint32_t pc = kCodeBase;
    Memory memory;
    MiniOS os;
    /// argv as laid out in memory (for test-case rendering).
    std::vector<std::vector<smt::Expr>> argv;

    MiniVMContext();
    std::unique_ptr<engine::PlatformContext> clone() const override;
    void serialize(engine::BlobWriter& out) const override;
    static std::unique_ptr<MiniVMContext> deserialize(engine::BlobReader& in);
};

/// Builds the initial context and registers every input symbol on `state`.
/// Throws LoadError for a malformed or oversized image.
engine::State& load_program(engine::Engine& engine, const Program& program);

/// The MiniVM backend.
class MiniVM final : public engine::Platform
{
public:
    explicit MiniVM(MemoryModel model = MemoryModel::ConcretizingAddress) : model_{model} {}

    MemoryModel memory_model() const noexcept { return model_; }

    std::string_view tag() const override { return "minivm"; }
    std::uint64_t location(const engine::State& state) const override;
    engine::StepResult step(engine::State& state, engine::StepEnv& env) const override;
    engine::TestcaseFiles render_testcase(const engine::State& state, const engine::Model& model) const override;
    std::unique_ptr<engine::PlatformContext> deserialize_context(engine::BlobReader& in) const override;

private:
    engine::StepResult syscall(engine::State& state, engine::StepEnv& env) const;

    MemoryModel model_;
};

/// Fully concrete run of an image: no solver, same semantics and faults.
struct ReplayResult
{
    engine::Termination termination;
    std::vector<std::uint64_t> trace;
    std::vector<std::uint8_t> stdout_bytes;
    /// True when the step limit stopped the run first.
    bool step_limit = false;
};

ReplayResult concrete_replay(std::span<const std::uint8_t> image, std::span<const std::uint8_t> stdin_bytes,
    const std::vector<std::string>& argv = {}, std::size_t max_steps = 10'000'000);

}  // namespace symx::native
