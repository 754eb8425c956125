// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/engine/engine.hpp"

#include "symx/error.hpp"
#include "symx/smt/simplify.hpp"

#include <condition_variable>
#include <random>
#include <thread>

namespace symx::engine
{
Strategy parse_strategy(std::string_view text)
{
    if (text == "fifo")
        return Strategy::Fifo;
    if (text == "lifo")
        return Strategy::Lifo;
    if (text == "random")
        return Strategy::Random;
    throw ParseError("unknown strategy: " + std::string(text));
}

namespace
{
using Clock = std::chrono::steady_clock;

/// Shared bookkeeping for one run().
struct RunControl
{
    std::mutex mutex;
    std::condition_variable wake;
    std::size_t busy = 0;
    bool stop = false;
    std::mt19937_64 rng;
    std::optional<Clock::time_point> deadline;
    std::exception_ptr failure;
};
}  // namespace

class Worker
{
public:
    Worker(Engine& engine, RunControl& control) : engine_{engine}, control_{control}, solver_{engine.config_.solver} {}

    void run()
    {
        try
        {
            while (auto state = next())
            {
                explore(std::move(state));
                finish_item();
            }
        }
        catch (...)
        {
            std::lock_guard lock{control_.mutex};
            if (!control_.failure)
                control_.failure = std::current_exception();
            control_.stop = true;
            control_.busy = 0;
            control_.wake.notify_all();
        }
    }

private:
    std::unique_ptr<State> next()
    {
        std::unique_lock lock{control_.mutex};
        for (;;)
        {
            if (control_.stop)
                return nullptr;
            if (!engine_.queue_.empty())
                break;
            if (control_.busy == 0)
            {
                control_.wake.notify_all();
                return nullptr;
            }
            control_.wake.wait(lock);
        }
        Engine::Item item;
        switch (engine_.config_.strategy)
        {
        case Strategy::Fifo:
            item = std::move(engine_.queue_.front());
            engine_.queue_.pop_front();
            break;
        case Strategy::Lifo:
            item = std::move(engine_.queue_.back());
            engine_.queue_.pop_back();
            break;
        case Strategy::Random: {
            std::uniform_int_distribution<std::size_t> pick(0, engine_.queue_.size() - 1);
            auto it = engine_.queue_.begin() + static_cast<std::ptrdiff_t>(pick(control_.rng));
            item = std::move(*it);
            engine_.queue_.erase(it);
            break;
        }
        }
        ++control_.busy;
        lock.unlock();
        return engine_.materialize(std::move(item));
    }

    void finish_item()
    {
        std::lock_guard lock{control_.mutex};
        --control_.busy;
        control_.wake.notify_all();
    }

    bool should_stop()
    {
        std::lock_guard lock{control_.mutex};
        if (control_.stop)
            return true;
        if (control_.deadline && Clock::now() >= *control_.deadline)
        {
            engine_.report_.timed_out = true;
            control_.stop = true;
        }
        else if (engine_.config_.max_instructions && engine_.report_.instructions >= *engine_.config_.max_instructions)
        {
            engine_.report_.limit_reached = true;
            control_.stop = true;
        }
        if (control_.stop)
            control_.wake.notify_all();
        return control_.stop;
    }

    /// Runs callbacks; a throwing callback abandons the state.
    template <class F>
    bool guarded(State& state, F&& f)
    {
        try
        {
            f();
            return true;
        }
        catch (const SolverUnknown& e)
        {
            state.add_message(std::string("callback: ") + e.what());
            terminate(state, Termination::solver_unknown());
        }
        catch (const std::exception& e)
        {
            state.add_message(std::string("callback raised: ") + e.what());
            terminate(state, Termination::abandoned());
        }
        return false;
    }

    void explore(std::unique_ptr<State> owned)
    {
        State& state = *owned;
        state.status_ = Status::Busy;
        state.solver_ = &solver_;
        const Platform& platform = engine_.platform_;
        StepEnv env{solver_, engine_.events_, {}};

        for (;;)
        {
            if (should_stop())
            {
                std::lock_guard lock{control_.mutex};
                ++engine_.report_.dropped;
                return;
            }
            const std::uint64_t loc = platform.location(state);
            if (!state.resume_)
            {
                state.append_trace(loc);
                if (const auto* hooks = engine_.hooks_.at(loc))
                {
                    for (const auto& hook : *hooks)
                        if (!guarded(state, [&] { hook(state); }))
                            return keep(std::move(owned));
                }
                if (!guarded(state, [&] {
                        engine_.events_.emit(Event{.kind = EventKind::WillExecuteInstruction, .state = state, .location = loc});
                    }))
                    return keep(std::move(owned));
                if (state.abandon_requested_)
                {
                    terminate(state, Termination::abandoned());
                    return keep(std::move(owned));
                }
            }
            state.resume_ = false;
            env.instruction.clear();
            {
                std::lock_guard lock{control_.mutex};
                ++engine_.report_.instructions;
            }

            StepResult result;
            try
            {
                result = platform.step(state, env);
            }
            catch (const SolverUnknown& e)
            {
                state.add_message(std::string("solver: ") + e.what());
                terminate(state, Termination::solver_unknown());
                return keep(std::move(owned));
            }
            catch (const std::exception& e)
            {
                throw Error("backend failure in state " + std::to_string(state.id()) + " at location 0x"
                    + to_hex(loc) + ": " + e.what());
            }

            auto did_execute = [&] {
                return guarded(state, [&] {
                    engine_.events_.emit(Event{.kind = EventKind::DidExecuteInstruction,
                        .state = state,
                        .location = loc,
                        .instruction = &env.instruction});
                });
            };

            if (std::holds_alternative<Continue>(result))
            {
                state.bindings_.clear();
                if (!did_execute())
                    return keep(std::move(owned));
                if (state.abandon_requested_)
                {
                    terminate(state, Termination::abandoned());
                    return keep(std::move(owned));
                }
                continue;
            }
            if (auto* t = std::get_if<Terminate>(&result))
            {
                if (did_execute())
                    terminate(state, state.abandon_requested_ ? Termination::abandoned() : t->reason);
                return keep(std::move(owned));
            }
            if (std::holds_alternative<Suspend>(result))
            {
                state.bindings_.clear();
                if (!did_execute())
                    return keep(std::move(owned));
                if (state.abandon_requested_)
                {
                    terminate(state, Termination::abandoned());
                    return keep(std::move(owned));
                }
                state.status_ = Status::Ready;
                state.solver_ = nullptr;
                std::lock_guard lock{control_.mutex};
                ++engine_.report_.suspended;
                engine_.suspended_.push_back(std::move(owned));
                return;
            }
            auto& c = std::get<Concretize>(result);
            if (!c.reexecute)
            {
                state.bindings_.clear();
                if (!did_execute())
                    return keep(std::move(owned));
            }
            if (state.abandon_requested_)
            {
                terminate(state, Termination::abandoned());
                return keep(std::move(owned));
            }
            try
            {
                fork(state, c);
            }
            catch (const SolverUnknown& e)
            {
                state.add_message(std::string("solver: ") + e.what());
                terminate(state, Termination::solver_unknown());
                return keep(std::move(owned));
            }
            return;
        }
    }

    void fork(State& parent, const Concretize& c)
    {
        const Policy policy = c.policy.value_or(engine_.config_.default_policy);
        const smt::Expr e = smt::simplify(c.expression);
        smt::ConstraintSet& cs = parent.constraints_;
        std::vector<std::pair<Word, smt::Expr>> picks;

        if (e.sort().is_bool())
        {
            auto feasible = [&](const smt::Expr& side) {
                return solver_.can_be_true(cs, c.guard ? smt::land(*c.guard, side) : side);
            };
            if (feasible(e))
                picks.emplace_back(1, e);
            const smt::Expr ne = smt::lnot(e);
            if (feasible(ne))
                picks.emplace_back(0, ne);
        }
        else
        {
            std::vector<Word> values;
            switch (policy.kind)
            {
            case Policy::Kind::All: {
                const std::size_t cap = std::max<std::size_t>(policy.cap, 1);
                values = solver_.all_values(cs, e, cap + 1, c.guard);
                if (values.size() > cap)
                {
                    values.resize(cap);
                    parent.add_message("warning: concretization of " + smt::term_to_smtlib(e) + " truncated to "
                        + std::to_string(cap) + " values");
                }
                break;
            }
            case Policy::Kind::One:
                try
                {
                    values.push_back(solver_.get_value(cs, e, c.guard));
                }
                catch (const NoModel&)
                {
                }
                break;
            case Policy::Kind::MinMax: {
                const auto r = solver_.check(cs, c.guard);
                if (r.verdict == smt::Verdict::Unknown)
                    throw SolverUnknown("minmax feasibility check returned unknown");
                if (r.verdict == smt::Verdict::Sat)
                {
                    values.push_back(solver_.min_value(cs, e, c.guard));
                    const Word hi = solver_.max_value(cs, e, c.guard);
                    if (hi != values.front())
                        values.push_back(hi);
                }
                break;
            }
            }
            for (const auto& v : values)
                picks.emplace_back(v, smt::eq(e, smt::Expr::constant(v, e.width())));
        }

        {
            std::lock_guard lock{control_.mutex};
            ++engine_.report_.concretizations;
            if (picks.size() >= 2)
                ++engine_.report_.forks;
            engine_.report_.children += picks.size();
            engine_.report_.states_created += picks.size();
        }
        if (picks.empty())
        {
            parent.add_message("no feasible value for " + smt::term_to_smtlib(e));
            terminate(parent, Termination::abandoned());
            return;
        }

        // The parent retires; it is neither re-executed nor persisted.
        parent.status_ = Status::Terminated;
        for (auto& [value, constraint] : picks)
        {
            auto child = parent.spawn(engine_.next_state_id());
            if (c.guard)
                child->constraints_.add(*c.guard);
            child->constraints_.add(constraint);
            if (c.setter)
                c.setter(*child, value);
            if (c.reexecute)
            {
                child->bindings_.emplace_back(e, value);
                if (e != c.expression)
                    child->bindings_.emplace_back(c.expression, value);
                child->resume_ = true;
            }
            else
                child->bindings_.clear();
            child->solver_ = &solver_;
            bool ok = guarded(*child, [&] {
                engine_.events_.emit(Event{.kind = EventKind::StateForked,
                    .state = *child,
                    .location = engine_.platform_.location(parent),
                    .parent = &parent,
                    .fork_value = value});
            });
            child->solver_ = nullptr;
            if (!ok)
            {
                keep(std::move(child));
                continue;
            }
            child->status_ = Status::Ready;
            engine_.push(std::move(child));
            control_.wake.notify_one();
        }
    }

    void terminate(State& state, Termination reason)
    {
        state.status_ = Status::Terminated;
        std::optional<Model> model;
        if (reason.kind != TerminationKind::Abandoned && reason.kind != TerminationKind::SolverUnknown)
        {
            // Feasibility is checked here, at save time.
            std::vector<smt::Expr> vars;
            for (const auto& in : state.inputs_)
                vars.push_back(in.variable);
            try
            {
                model = solver_.model(state.constraints_, vars);
            }
            catch (const NoModel&)
            {
                state.add_message("infeasible at save: path constraints are unsatisfiable");
                reason = Termination::abandoned();
            }
            catch (const SolverUnknown& e)
            {
                state.add_message(std::string("no model: ") + e.what());
            }
        }
        state.termination_ = reason;
        const bool abandoned = reason.kind == TerminationKind::Abandoned;
        try
        {
            engine_.events_.emit(Event{.kind = EventKind::StateTerminated, .state = state, .termination = &*state.termination_});
        }
        catch (const std::exception& e)
        {
            state.add_message(std::string("state_terminated subscriber raised: ") + e.what());
        }
        if (!abandoned && engine_.sink_ != nullptr)
            engine_.sink_->save(state, model, engine_.platform_);
        state.solver_ = nullptr;

        std::lock_guard lock{control_.mutex};
        ++engine_.report_.terminated;
        ++engine_.report_.by_reason[std::string(to_string(reason.kind))];
        if (abandoned)
            ++engine_.report_.abandoned;
        else
            ++engine_.report_.testcases;
        if (engine_.config_.max_states && engine_.report_.states_created >= *engine_.config_.max_states)
        {
            engine_.report_.limit_reached = true;
            control_.stop = true;
            control_.wake.notify_all();
        }
    }

    void keep(std::unique_ptr<State> state)
    {
        if (!engine_.config_.keep_terminated || state->status_ != Status::Terminated || !state->termination_)
            return;
        state->solver_ = nullptr;
        std::lock_guard lock{control_.mutex};
        engine_.terminated_.push_back(std::move(state));
    }

    Engine& engine_;
    RunControl& control_;
    smt::Solver solver_;
};

Engine::Engine(const Platform& platform, EngineConfig config) : platform_{platform}, config_{std::move(config)}
{
    if (config_.workers == 0)
        throw Error("engine needs at least one worker");
}

Engine::~Engine() = default;

State& Engine::add_state(std::unique_ptr<PlatformContext> context)
{
    auto state = std::make_unique<State>(next_state_id(), std::move(context));
    State& ref = *state;
    ++report_.states_created;
    queue_.emplace_back(std::move(state));
    return ref;
}

std::vector<State*> Engine::ready_states()
{
    std::vector<State*> out;
    for (auto& item : queue_)
    {
        if (auto* blob = std::get_if<std::string>(&item))
            item = deserialize_state(*blob, platform_);
        out.push_back(std::get<std::unique_ptr<State>>(item).get());
    }
    return out;
}

smt::Solver& Engine::solver()
{
    if (!solver_)
        solver_ = std::make_unique<smt::Solver>(config_.solver);
    return *solver_;
}

void Engine::push(std::unique_ptr<State> state)
{
    // Multi-worker queues hold self-contained blobs, so no live state is
    // shared between threads.
    if (config_.workers > 1)
    {
        BlobWriter out;
        state->serialize(out, platform_.tag());
        std::lock_guard lock{*push_mutex_};
        queue_.emplace_back(out.take());
        return;
    }
    std::lock_guard lock{*push_mutex_};
    queue_.emplace_back(std::move(state));
}

std::unique_ptr<State> Engine::materialize(Item item) const
{
    if (auto* blob = std::get_if<std::string>(&item))
        return deserialize_state(*blob, platform_);
    return std::move(std::get<std::unique_ptr<State>>(item));
}

const Report& Engine::run()
{
    const auto start = Clock::now();
    RunControl control;
    control.rng.seed(config_.seed);
    if (config_.wall_clock)
        control.deadline = start + *config_.wall_clock;
    push_mutex_ = &control.mutex;

    // Queued live states are serialized too when several workers run.
    if (config_.workers > 1)
        for (auto& item : queue_)
            if (auto* live = std::get_if<std::unique_ptr<State>>(&item))
            {
                BlobWriter out;
                (*live)->serialize(out, platform_.tag());
                item = out.take();
            }

    std::vector<std::unique_ptr<Worker>> workers;
    for (unsigned i = 0; i < config_.workers; ++i)
        workers.push_back(std::make_unique<Worker>(*this, control));
    if (workers.size() == 1)
        workers.front()->run();
    else
    {
        std::vector<std::thread> threads;
        for (auto& w : workers)
            threads.emplace_back([&w] { w->run(); });
        for (auto& t : threads)
            t.join();
    }
    push_mutex_ = nullptr;

    for (auto& s : suspended_)
        queue_.emplace_back(std::move(s));
    suspended_.clear();
    report_.ready = queue_.size();
    report_.wall_seconds += std::chrono::duration<double>(Clock::now() - start).count();
    if (control.failure)
        std::rethrow_exception(control.failure);
    return report_;
}

}  // namespace symx::engine
