// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/engine.hpp"

#include <mutex>
#include <set>
#include <vector>

namespace collect
{
/// What a saved test case looks like from outside the engine.
struct Case
{
    std::uint64_t id;
    std::vector<std::uint64_t> trace;
    symx::engine::Termination termination;
    std::optional<symx::engine::Model> model;
    symx::engine::TestcaseFiles files;
    std::vector<std::string> messages;
};

class Sink final : public symx::engine::TestcaseSink
{
public:
    void save(const symx::engine::State& state, const std::optional<symx::engine::Model>& model,
        const symx::engine::Platform& platform) override
    {
        Case c{state.id(), state.trace(), *state.termination(), model, {}, state.messages()};
        if (model)
            c.files = platform.render_testcase(state, *model);
        std::lock_guard lock(mutex_);
        cases.push_back(std::move(c));
    }

    std::set<std::vector<std::uint64_t>> traces() const
    {
        std::set<std::vector<std::uint64_t>> out;
        for (const auto& c : cases)
            out.insert(c.trace);
        return out;
    }

    std::vector<Case> cases;

private:
    std::mutex mutex_;
};

inline std::vector<std::uint8_t> bytes_of(const std::string& s)
{
    return {s.begin(), s.end()};
}

/// Splits the NUL-terminated argv file back into strings.
inline std::vector<std::string> split_argv(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s)
    {
        if (c == '\0')
        {
            out.push_back(cur);
            cur.clear();
        }
        else
            cur.push_back(c);
    }
    return out;
}

}  // namespace collect
