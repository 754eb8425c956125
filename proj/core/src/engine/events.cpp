// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/engine/events.hpp"

namespace symx::engine
{
void EventBus::subscribe(EventKind kind, EventCallback callback)
{
    subscribers_[index(kind)].push_back(std::move(callback));
}

void EventBus::emit(const Event& event) const
{
    for (const auto& cb : subscribers_[index(event.kind)])
        cb(event);
}

void HookRegistry::add(std::uint64_t location, HookCallback callback)
{
    hooks_[location].push_back(std::move(callback));
}

const std::vector<HookCallback>* HookRegistry::at(std::uint64_t location) const
{
    auto it = hooks_.find(location);
    return it == hooks_.end() ? nullptr : &it->second;
}

}  // namespace symx::engine
