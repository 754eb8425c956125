// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/smt/solver.hpp"

#include "symx/error.hpp"
#include "symx/smt/simplify.hpp"
#include "symx/util/process.hpp"

#include <cstdlib>
#include <sstream>

namespace symx::smt
{
class SolverProcess : public ChildProcess
{
public:
    using ChildProcess::ChildProcess;
};

namespace
{
using Clock = std::chrono::steady_clock;

std::string helper_name(std::size_t i)
{
    return "_symx_q" + std::to_string(i);
}

int paren_balance(const std::string& s)
{
    int depth = 0;
    bool in_string = false;
    for (char c : s)
    {
        if (c == '"')
            in_string = !in_string;
        else if (!in_string && c == '(')
            ++depth;
        else if (!in_string && c == ')')
            --depth;
    }
    return depth;
}

Verdict parse_verdict(const std::string& line)
{
    if (line == "sat")
        return Verdict::Sat;
    if (line == "unsat")
        return Verdict::Unsat;
    if (line == "unknown" || line == "timeout")
        return Verdict::Unknown;
    throw SolverUnavailable("unexpected solver response: " + line);
}

/// Reads one complete S-expression response (possibly spanning lines).
std::optional<std::string> read_sexpr(ChildProcess& p, Clock::time_point deadline)
{
    std::string text;
    int depth = 0;
    do
    {
        auto line = p.read_line(deadline);
        if (!line)
            return std::nullopt;
        if (text.empty() && line->empty())
            continue;
        text += *line;
        text += '\n';
        depth += paren_balance(*line);
    } while (depth > 0);
    return text;
}

std::map<std::string, Word> parse_values(const std::string& response)
{
    std::map<std::string, Word> out;
    const auto parsed = parse_sexprs(response);
    if (parsed.size() != 1 || parsed[0].is_atom())
        throw SolverUnavailable("malformed get-value response: " + response);
    for (const auto& pair : parsed[0].list())
    {
        if (pair.is_atom() || pair.list().size() != 2 || !pair.list()[0].is_atom())
        {
            if (!pair.is_atom() && !pair.list().empty() && pair.list()[0].is_atom("error"))
                throw SolverUnavailable("solver error: " + response);
            throw SolverUnavailable("malformed get-value entry: " + response);
        }
        out.emplace(pair.list()[0].atom(), parse_value(pair.list()[1]));
    }
    return out;
}

/// Name used to request the value of `e`: the variable itself or a helper.
std::string value_handle(const Expr& e, std::size_t i)
{
    return e.is_variable() ? e.name() : helper_name(i);
}
}  // namespace

std::string_view to_string(Verdict v)
{
    switch (v)
    {
    case Verdict::Sat:
        return "sat";
    case Verdict::Unsat:
        return "unsat";
    case Verdict::Unknown:
        return "unknown";
    }
    return "?";
}

SolverConfig SolverConfig::from_environment()
{
    SolverConfig config;
    if (const char* env = std::getenv("SYMX_SOLVER"); env != nullptr && *env != '\0')
    {
        std::istringstream in{env};
        std::vector<std::string> argv;
        for (std::string tok; in >> tok;)
            argv.push_back(tok);
        if (!argv.empty())
            config.command = std::move(argv);
    }
    return config;
}

Solver::Solver(SolverConfig config) : config_{std::move(config)}
{
    if (config_.timeout.count() <= 0)
        throw Error("solver timeout must be positive");
}

Solver::~Solver() = default;

void Solver::start()
{
    declared_.clear();
    process_ = std::make_unique<SolverProcess>(config_.command);
    const auto deadline = Clock::now() + config_.timeout;
    const std::string setup = "(set-option :print-success true)\n(set-option :produce-models true)\n(set-logic "
        + config_.logic + ")\n(push 1)\n";
    if (!process_->write(setup))
        throw SolverUnavailable("cannot write to solver " + config_.command.front());
    for (int i = 0; i < 3; ++i)
    {
        auto line = read_sexpr(*process_, deadline);
        if (!line)
            throw SolverUnavailable("solver " + config_.command.front() + " did not start");
        if (line->find("success") == std::string::npos)
            throw SolverUnavailable("solver rejected setup: " + *line);
    }
    auto push = read_sexpr(*process_, deadline);
    if (!push)
        throw SolverUnavailable("solver " + config_.command.front() + " did not answer");
    if (push->find("success") == std::string::npos)
    {
        // No incremental mode: fall back to one script per query.
        incremental_ = false;
        process_.reset();
        return;
    }
    // The probing scope stays open as the base level for declarations.
}

void Solver::restart()
{
    ++stats_.restarts;
    process_.reset();
    declared_.clear();
}

SolverResult Solver::run(const ConstraintSet& cs, const std::vector<Expr>& extra, const std::vector<Expr>& values)
{
    ++stats_.queries;
    SolverResult r;
    bool trivially_false = cs.trivially_unsat();
    for (const auto& x : extra)
        trivially_false = trivially_false || x.is_false();
    if (trivially_false)
        r.verdict = Verdict::Unsat;
    else if (incremental_)
    {
        if (!process_)
            start();
        r = incremental_ ? run_incremental(cs, extra, values) : run_one_shot(cs, extra, values);
    }
    else
        r = run_one_shot(cs, extra, values);

    switch (r.verdict)
    {
    case Verdict::Sat:
        ++stats_.sat;
        break;
    case Verdict::Unsat:
        ++stats_.unsat;
        break;
    case Verdict::Unknown:
        ++stats_.unknown;
        break;
    }
    return r;
}

SolverResult Solver::run_incremental(const ConstraintSet& cs, const std::vector<Expr>& extra, const std::vector<Expr>& values)
{
    const auto deadline = Clock::now() + config_.timeout;
    std::string script;
    std::size_t expected = 0;

    auto declare_base = [&](const std::string& name, const Sort& sort) {
        if (declared_.insert(name).second)
        {
            script += declaration_to_smtlib(name, sort) + "\n";
            ++expected;
        }
    };
    for (const auto& [name, sort] : cs.declarations())
        declare_base(name, sort);
    std::map<std::string, Sort> extra_vars;
    for (const auto& x : extra)
        collect_variables(x, extra_vars);
    for (const auto& v : values)
        collect_variables(v, extra_vars);
    for (const auto& [name, sort] : extra_vars)
        declare_base(name, sort);

    script += "(push 1)\n";
    ++expected;
    for (const auto& a : cs.assertions())
    {
        script += "(assert " + term_to_smtlib(a) + ")\n";
        ++expected;
    }
    for (const auto& x : extra)
    {
        script += "(assert " + term_to_smtlib(x) + ")\n";
        ++expected;
    }
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (values[i].is_variable())
            continue;
        script += declaration_to_smtlib(helper_name(i), values[i].sort()) + "\n";
        script += "(assert (= " + helper_name(i) + " " + term_to_smtlib(values[i]) + "))\n";
        expected += 2;
    }
    script += "(check-sat)\n";

    auto fail = [&](const std::string& why) -> SolverResult {
        const bool timeout = process_ && process_->timed_out();
        restart();
        if (timeout)
            return SolverResult{Verdict::Unknown, std::nullopt};
        throw SolverUnavailable(why);
    };

    if (!process_->write(script))
        return fail("solver closed its input");
    for (std::size_t i = 0; i < expected; ++i)
    {
        auto line = read_sexpr(*process_, deadline);
        if (!line)
            return fail("solver stopped responding");
        if (line->find("success") == std::string::npos)
        {
            restart();
            throw SolverUnavailable("solver error: " + *line);
        }
    }
    auto verdict_line = read_sexpr(*process_, deadline);
    if (!verdict_line)
        return fail("solver stopped responding");
    while (!verdict_line->empty() && verdict_line->back() == '\n')
        verdict_line->pop_back();

    SolverResult result;
    result.verdict = parse_verdict(*verdict_line);
    if (result.verdict == Verdict::Sat && !values.empty())
    {
        std::string request = "(get-value (";
        for (std::size_t i = 0; i < values.size(); ++i)
            request += (i ? " " : "") + value_handle(values[i], i);
        request += "))\n";
        if (!process_->write(request))
            return fail("solver closed its input");
        auto response = read_sexpr(*process_, deadline);
        if (!response)
            return fail("solver stopped responding");
        result.model = parse_values(*response);
    }
    if (!process_->write("(pop 1)\n"))
        return fail("solver closed its input");
    auto popped = read_sexpr(*process_, deadline);
    if (!popped || popped->find("success") == std::string::npos)
        return fail("solver failed to pop");
    return result;
}

SolverResult Solver::run_one_shot(const ConstraintSet& cs, const std::vector<Expr>& extra, const std::vector<Expr>& values)
{
    const auto deadline = Clock::now() + config_.timeout;
    std::string script = "(set-option :produce-models true)\n";
    ConstraintSet all = cs;
    for (const auto& x : extra)
        all.add(x);
    for (const auto& v : values)
        if (v.is_variable())
            all.declare(v);
    std::string body = to_smtlib(all, std::nullopt, config_.logic);
    body.erase(body.rfind("(check-sat)"));
    script += body;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (values[i].is_variable())
            continue;
        script += declaration_to_smtlib(helper_name(i), values[i].sort()) + "\n";
        script += "(assert (= " + helper_name(i) + " " + term_to_smtlib(values[i]) + "))\n";
    }
    script += "(check-sat)\n";
    if (!values.empty())
    {
        script += "(get-value (";
        for (std::size_t i = 0; i < values.size(); ++i)
            script += (i ? " " : "") + value_handle(values[i], i);
        script += "))\n";
    }
    script += "(exit)\n";

    SolverProcess p{config_.command};
    if (!p.write(script))
        throw SolverUnavailable("cannot write to solver " + config_.command.front());
    p.close_input();
    auto verdict_line = read_sexpr(p, deadline);
    if (!verdict_line)
    {
        if (p.timed_out())
            return SolverResult{Verdict::Unknown, std::nullopt};
        throw SolverUnavailable("solver " + config_.command.front() + " produced no answer");
    }
    while (!verdict_line->empty() && verdict_line->back() == '\n')
        verdict_line->pop_back();
    SolverResult result;
    result.verdict = parse_verdict(*verdict_line);
    if (result.verdict == Verdict::Sat && !values.empty())
    {
        auto response = read_sexpr(p, deadline);
        if (!response)
            return SolverResult{Verdict::Unknown, std::nullopt};
        result.model = parse_values(*response);
    }
    return result;
}

SolverResult Solver::check(const ConstraintSet& cs, const std::optional<Expr>& extra)
{
    std::vector<Expr> xs;
    if (extra)
    {
        Expr s = simplify(*extra);
        if (!s.is_true())
            xs.push_back(std::move(s));
    }
    if (!cs.trivially_unsat() && cs.empty() && xs.empty())
    {
        ++stats_.queries;
        ++stats_.sat;
        return SolverResult{Verdict::Sat, std::nullopt};
    }
    return run(cs, xs, {});
}

std::vector<Word> Solver::get_values(const ConstraintSet& cs, const std::vector<Expr>& exprs, const std::optional<Expr>& extra)
{
    std::vector<Expr> xs;
    if (extra)
    {
        Expr s = simplify(*extra);
        if (!s.is_true())
            xs.push_back(std::move(s));
    }
    std::vector<Expr> handles;
    for (const auto& e : exprs)
    {
        if (e.sort().is_array())
            throw SortError("get_value on an array expression");
        handles.push_back(simplify(e));
    }
    auto r = run(cs, xs, handles);
    if (r.verdict == Verdict::Unsat)
        throw NoModel("get_value: constraints are unsatisfiable");
    if (r.verdict == Verdict::Unknown)
        throw SolverUnknown("get_value: solver returned unknown");
    std::vector<Word> out;
    for (std::size_t i = 0; i < handles.size(); ++i)
    {
        auto it = r.model->find(value_handle(handles[i], i));
        if (it == r.model->end())
            throw SolverUnavailable("solver omitted a requested value");
        out.push_back(it->second);
    }
    return out;
}

Word Solver::get_value(const ConstraintSet& cs, const Expr& e, const std::optional<Expr>& extra)
{
    return get_values(cs, {e}, extra).front();
}

std::map<std::string, Word> Solver::model(const ConstraintSet& cs, const std::vector<Expr>& variables)
{
    std::vector<Expr> constrained;
    std::map<std::string, Word> out;
    for (const auto& v : variables)
    {
        if (cs.declarations().contains(v.name()))
            constrained.push_back(v);
        else
            out.emplace(v.name(), 0);
    }
    if (constrained.empty())
    {
        auto r = check(cs);
        if (r.verdict == Verdict::Unsat)
            throw NoModel("model: constraints are unsatisfiable");
        if (r.verdict == Verdict::Unknown)
            throw SolverUnknown("model: solver returned unknown");
        return out;
    }
    const auto values = get_values(cs, constrained);
    for (std::size_t i = 0; i < constrained.size(); ++i)
        out.emplace(constrained[i].name(), values[i]);
    return out;
}

bool Solver::can_be_true(const ConstraintSet& cs, const Expr& cond)
{
    const auto r = check(cs, cond);
    if (r.verdict == Verdict::Unknown)
        throw SolverUnknown("can_be_true: solver returned unknown");
    return r.verdict == Verdict::Sat;
}

bool Solver::must_be_true(const ConstraintSet& cs, const Expr& cond)
{
    const auto r = check(cs, lnot(cond));
    if (r.verdict == Verdict::Unknown)
        throw SolverUnknown("must_be_true: solver returned unknown");
    return r.verdict == Verdict::Unsat;
}

std::vector<Word> Solver::all_values(const ConstraintSet& cs, const Expr& e, std::size_t cap, const std::optional<Expr>& extra)
{
    if (cap == 0)
        throw Error("all_values: cap must be at least 1");
    const Expr target = simplify(e);
    std::vector<Word> found;
    Expr blocking = extra ? *extra : Expr::boolean(true);
    while (found.size() < cap)
    {
        if (target.is_constant())
        {
            if (check(cs, blocking).verdict == Verdict::Sat)
                found.push_back(target.value());
            break;
        }
        Word v;
        try
        {
            v = get_value(cs, target, blocking);
        }
        catch (const NoModel&)
        {
            break;
        }
        found.push_back(v);
        const Expr literal = target.sort().is_bool() ? Expr::boolean(v != 0) : Expr::constant(v, target.width());
        blocking = land(blocking, ne(target, literal));
    }
    return found;
}

Word Solver::min_value(const ConstraintSet& cs, const Expr& e, const std::optional<Expr>& extra)
{
    const Expr x = e.sort().is_bool() ? bool_to_bv(e, 1) : e;
    const Expr base = extra ? *extra : Expr::boolean(true);
    Word hi = get_value(cs, x, base);
    Word lo = 0;
    while (lo < hi)
    {
        const Word mid = lo + (hi - lo) / 2;
        const auto r = check(cs, land(base, ule(x, Expr::constant(mid, x.width()))));
        if (r.verdict == Verdict::Unknown)
            throw SolverUnknown("min_value: solver returned unknown");
        if (r.verdict == Verdict::Sat)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

Word Solver::max_value(const ConstraintSet& cs, const Expr& e, const std::optional<Expr>& extra)
{
    const Expr x = e.sort().is_bool() ? bool_to_bv(e, 1) : e;
    const Expr base = extra ? *extra : Expr::boolean(true);
    Word lo = get_value(cs, x, base);
    Word hi = low_mask(x.width());
    while (lo < hi)
    {
        const Word mid = lo + (hi - lo) / 2 + 1;
        const auto r = check(cs, land(base, uge(x, Expr::constant(mid, x.width()))));
        if (r.verdict == Verdict::Unknown)
            throw SolverUnknown("max_value: solver returned unknown");
        if (r.verdict == Verdict::Sat)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

}  // namespace symx::smt
