// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/engine/state.hpp"

#include "symx/engine/platform.hpp"
#include "symx/error.hpp"
#include "symx/smt/smtlib.hpp"

#include <charconv>

namespace symx::engine
{
namespace
{
constexpr std::string_view kBlobMagic = "symx-state";
constexpr std::uint32_t kBlobVersion = 1;

constexpr std::pair<TerminationKind, std::string_view> kTerminationNames[] = {
    {TerminationKind::Exit, "exit"},
    {TerminationKind::MemoryViolation, "memory-violation"},
    {TerminationKind::InvalidInstruction, "invalid-instruction"},
    {TerminationKind::Revert, "revert"},
    {TerminationKind::OutOfGas, "out-of-gas"},
    {TerminationKind::Abandoned, "abandoned"},
    {TerminationKind::SolverUnknown, "solver-unknown"},
};
}  // namespace

std::string_view to_string(TerminationKind k)
{
    for (const auto& [kind, name] : kTerminationNames)
        if (kind == k)
            return name;
    return "unknown";
}

std::string to_string(const Termination& t)
{
    for (const auto& [kind, name] : kTerminationNames)
    {
        if (kind != t.kind)
            continue;
        if (kind == TerminationKind::Exit)
            return std::string(name) + " " + t.detail.str();
        if (kind == TerminationKind::MemoryViolation)
            return std::string(name) + " 0x" + to_hex(t.detail);
        return std::string(name);
    }
    return "unknown";
}

Termination parse_termination(std::string_view text)
{
    const auto space = text.find(' ');
    const auto head = text.substr(0, space);
    const auto arg = space == std::string_view::npos ? std::string_view{} : text.substr(space + 1);
    for (const auto& [kind, name] : kTerminationNames)
    {
        if (head != name)
            continue;
        Termination t{kind, 0};
        try
        {
            if (kind == TerminationKind::Exit)
                t.detail = Word(std::string(arg));
            else if (kind == TerminationKind::MemoryViolation)
                t.detail = from_hex(arg);
        }
        catch (const std::exception&)
        {
            throw ParseError("bad termination detail: " + std::string(text));
        }
        return t;
    }
    throw ParseError("unknown termination: " + std::string(text));
}

std::string_view to_string(Policy::Kind k)
{
    switch (k)
    {
    case Policy::Kind::All:
        return "all";
    case Policy::Kind::One:
        return "one";
    case Policy::Kind::MinMax:
        return "minmax";
    }
    return "?";
}

Policy parse_policy(std::string_view text)
{
    if (text == "all")
        return Policy::all();
    if (text == "one")
        return Policy::one();
    if (text == "minmax")
        return Policy::minmax();
    throw ParseError("unknown policy: " + std::string(text));
}

State::State(std::uint64_t id, std::unique_ptr<PlatformContext> context) : id_{id}, context_{std::move(context)}
{
}

void State::register_input(const smt::Expr& variable, std::string provenance)
{
    constraints_.declare(variable);
    inputs_.push_back({variable, std::move(provenance)});
}

smt::Solver& State::solver()
{
    if (solver_ == nullptr)
        throw Error("state " + std::to_string(id_) + " has no solver attached (not Busy)");
    return *solver_;
}

bool State::can_be_true(const smt::Expr& cond)
{
    return solver().can_be_true(constraints_, cond);
}

bool State::must_be_true(const smt::Expr& cond)
{
    return solver().must_be_true(constraints_, cond);
}

Word State::solve_one(const smt::Expr& e)
{
    return solver().get_value(constraints_, e);
}

void State::constrain(const smt::Expr& cond)
{
    constraints_.add(cond);
}

std::optional<Word> State::binding(const smt::Expr& e) const
{
    for (const auto& [expr, value] : bindings_)
        if (expr == e)
            return value;
    return std::nullopt;
}

std::optional<Word> State::concrete(const smt::Expr& e) const
{
    if (e.is_constant())
        return e.value();
    return binding(e);
}

std::unique_ptr<State> State::spawn(std::uint64_t child_id)
{
    auto child = std::make_unique<State>(child_id, context_->clone());
    child->constraints_ = constraints_.fork();
    child->inputs_ = inputs_;
    child->trace_ = trace_;
    child->messages_ = messages_;
    child->bindings_ = bindings_;
    child->parent_id_ = id_;
    ++child_counter_;
    return child;
}

void State::serialize(BlobWriter& out, std::string_view platform_tag) const
{
    out.string(kBlobMagic);
    out.u32(kBlobVersion);
    out.u64(id_);
    out.boolean(parent_id_.has_value());
    out.u64(parent_id_.value_or(0));
    out.u64(child_counter_);
    out.string(smt::to_smtlib(constraints_));
    out.string(platform_tag);
    BlobWriter ctx;
    context_->serialize(ctx);
    out.string(ctx.data());
    out.u32(static_cast<std::uint32_t>(trace_.size()));
    for (auto loc : trace_)
        out.u64(loc);
    out.u32(static_cast<std::uint32_t>(inputs_.size()));
    for (const auto& in : inputs_)
    {
        out.expr(in.variable);
        out.string(in.provenance);
    }
    out.u32(static_cast<std::uint32_t>(messages_.size()));
    for (const auto& m : messages_)
        out.string(m);
    out.u32(static_cast<std::uint32_t>(bindings_.size()));
    for (const auto& [e, v] : bindings_)
    {
        out.expr(e);
        out.word(v);
    }
    out.boolean(resume_);
}

std::unique_ptr<State> deserialize_state(std::string_view blob, const Platform& platform)
{
    BlobReader in{blob};
    if (in.string() != kBlobMagic)
        throw Error("not a symx state blob");
    if (const auto v = in.u32(); v != kBlobVersion)
        throw Error("unsupported state blob version " + std::to_string(v));
    const auto id = in.u64();
    const bool has_parent = in.boolean();
    const auto parent = in.u64();
    const auto children = in.u64();
    auto constraints = smt::parse_script(in.string());
    if (const auto tag = in.string(); tag != platform.tag())
        throw Error("state blob belongs to platform '" + tag + "', not '" + std::string(platform.tag()) + "'");
    const std::string ctx_bytes = in.string();
    BlobReader ctx{ctx_bytes};
    auto state = std::make_unique<State>(id, platform.deserialize_context(ctx));
    state->constraints_ = std::move(constraints);
    if (has_parent)
        state->parent_id_ = parent;
    state->child_counter_ = children;
    for (auto n = in.u32(); n > 0; --n)
        state->trace_.push_back(in.u64());
    for (auto n = in.u32(); n > 0; --n)
    {
        auto var = in.expr();
        state->inputs_.push_back({var, in.string()});
    }
    for (auto n = in.u32(); n > 0; --n)
        state->messages_.push_back(in.string());
    for (auto n = in.u32(); n > 0; --n)
    {
        auto e = in.expr();
        state->bindings_.emplace_back(e, in.word());
    }
    state->resume_ = in.boolean();
    return state;
}

}  // namespace symx::engine
