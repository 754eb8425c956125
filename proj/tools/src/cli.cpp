// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/cli/cli.hpp"

#include "symx/engine/workspace.hpp"
#include "symx/error.hpp"
#include "symx/evm/analysis.hpp"
#include "symx/evm/evm.hpp"
#include "symx/evm/opcodes.hpp"
#include "symx/native/isa.hpp"
#include "symx/native/minivm.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

namespace symx::cli
{
namespace fs = std::filesystem;

namespace
{
std::vector<std::uint8_t> decode_hex(const std::string& text, const char* what)
{
    try
    {
        return evm::parse_hex(text);
    }
    catch (const ParseError& e)
    {
        throw UsageError(std::string(what) + ": " + e.what());
    }
}

std::vector<std::uint8_t> read_bytes(const fs::path& p)
{
    try
    {
        const std::string s = engine::read_file(p);
        return {s.begin(), s.end()};
    }
    catch (const Error&)
    {
        throw UsageError("cannot read " + p.string());
    }
}

/// Holds rendered test cases until the run ends, then numbers them in a
/// content order so worker interleaving never changes file names.
class OrderedSink final : public engine::TestcaseSink
{
public:
    void save(const engine::State& state, const std::optional<engine::Model>& model,
        const engine::Platform& platform) override
    {
        auto files = engine::Workspace::render(state, model, platform);
        std::lock_guard lock{mutex_};
        cases_.push_back(std::move(files));
    }

    std::size_t flush(engine::Workspace& ws)
    {
        std::lock_guard lock{mutex_};
        std::sort(cases_.begin(), cases_.end(), [](const auto& a, const auto& b) {
            const auto& ta = a.at("trace");
            const auto& tb = b.at("trace");
            return ta != tb ? ta < tb : a < b;
        });
        for (const auto& files : cases_)
            ws.store(files);
        const std::size_t n = cases_.size();
        cases_.clear();
        return n;
    }

private:
    std::mutex mutex_;
    std::vector<engine::TestcaseFiles> cases_;
};

/// Distinct MiniVM instruction addresses reached.
class NativeCoverage
{
public:
    explicit NativeCoverage(std::size_t instructions) : total_{instructions} {}

    void subscribe(engine::EventBus& events)
    {
        events.subscribe(engine::EventKind::DidExecuteInstruction, [this](const engine::Event& e) {
            std::lock_guard lock{mutex_};
            executed_.insert(e.location);
        });
    }

    double percent() const
    {
        return total_ == 0 ? 100.0 : 100.0 * static_cast<double>(executed_.size()) / static_cast<double>(total_);
    }

    std::string render() const
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, "code, %zu, %zu, %.2f%%\n", executed_.size(), total_, percent());
        return buf;
    }

private:
    std::size_t total_;
    std::mutex mutex_;
    std::set<std::uint64_t> executed_;
};

engine::EngineConfig engine_config(const Config& c)
{
    engine::EngineConfig e;
    e.workers = c.procs;
    e.strategy = c.strategy;
    e.seed = c.seed;
    e.default_policy = c.policy;
    e.wall_clock = std::chrono::milliseconds(static_cast<std::int64_t>(c.timeout * 1000));
    if (c.solver)
    {
        std::istringstream in{*c.solver};
        e.solver.command.clear();
        for (std::string word; in >> word;)
            e.solver.command.push_back(word);
        if (e.solver.command.empty())
            throw UsageError("empty solver command");
    }
    return e;
}

engine::Workspace open_workspace(const Config& c)
{
    return c.workspace ? engine::Workspace{*c.workspace} : engine::Workspace::create_unique(fs::current_path());
}

void print_summary(std::ostream& out, const engine::Report& r, double coverage, const engine::Workspace& ws)
{
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.2f%%", coverage);
    out << "states: " << r.states_created << " terminated: " << r.terminated << " abandoned: " << r.abandoned
        << " forks: " << r.forks << "\n";
    out << "testcases: " << ws.count() << " coverage: " << pct << "\n";
    if (r.timed_out)
        out << "timeout: exploration stopped early\n";
    out << "workspace: " << ws.path().string() << "\n";
}

int run_native(const Config& c, std::ostream& out)
{
    native::Program program;
    program.image = read_bytes(c.target);
    program.argv.push_back(native::parse_byte_spec(c.target.filename().string()));
    for (const auto& spec : c.argv_specs)
        program.argv.push_back(native::parse_byte_spec(spec));
    program.stdin_spec = native::concrete_bytes(c.data);
    const auto tail = native::symbolic_bytes(c.stdin_size);
    program.stdin_spec.insert(program.stdin_spec.end(), tail.begin(), tail.end());

    native::MiniVM vm{c.memory_model};
    engine::Engine engine{vm, engine_config(c)};
    OrderedSink sink;
    engine.set_sink(&sink);
    NativeCoverage coverage{program.image.size() / native::kInstructionSize};
    coverage.subscribe(engine.events());
    try
    {
        native::load_program(engine, program);
    }
    catch (const LoadError& e)
    {
        throw UsageError(e.what());
    }

    auto ws = open_workspace(c);
    try
    {
        engine.run();
    }
    catch (...)
    {
        sink.flush(ws);
        throw;
    }
    sink.flush(ws);
    ws.write("coverage.txt", coverage.render());
    print_summary(out, engine.report(), coverage.percent(), ws);
    return engine.report().timed_out ? kTimeout : kOk;
}

int run_evm(const Config& c, std::ostream& out)
{
    const auto raw = read_bytes(c.target);
    std::vector<std::uint8_t> code = decode_hex(std::string(raw.begin(), raw.end()), "bytecode");
    if (code.empty())
        throw UsageError("empty bytecode");

    evm::World world = evm::World::with_caller();
    const Word target = world.create_contract(std::move(code));

    evm::EVM vm;
    engine::Engine engine{vm, engine_config(c)};
    OrderedSink sink;
    engine.set_sink(&sink);
    evm::Coverage coverage{world};
    coverage.subscribe(engine.events());
    std::optional<evm::OverflowDetector> detector;
    if (c.detect_overflow)
    {
        detector.emplace(world);
        detector->subscribe(engine.events());
    }
    evm::add_world(engine, world);

    auto ws = open_workspace(c);
    try
    {
        evm::explore_transactions(engine, target, c.txlimit, c.txdatasize, c.gas);
    }
    catch (...)
    {
        sink.flush(ws);
        throw;
    }
    sink.flush(ws);
    ws.write("coverage.txt", coverage.render());
    if (detector)
        ws.write("findings.jsonl", detector->render());
    print_summary(out, engine.report(), coverage.aggregate().percent(), ws);
    if (detector)
        out << "findings: " << detector->findings().size() << "\n";
    return engine.report().timed_out ? kTimeout : kOk;
}

/// "a\0b\0" back into {"a", "b"}.
std::vector<std::string> split_nul(const std::string& raw)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : raw)
    {
        if (ch == '\0')
        {
            out.push_back(std::move(cur));
            cur.clear();
        }
        else
            cur += ch;
    }
    if (!cur.empty())
        out.push_back(std::move(cur));
    return out;
}

int run_replay(const Config& c, std::ostream& out)
{
    if (!c.workspace)
        throw UsageError("replay needs a workspace directory");
    const engine::Workspace ws{*c.workspace};
    if (fs::exists(ws.file(c.test_id, "input")))
        throw UsageError("replay is native only; " + engine::Workspace::test_name(c.test_id) + " is an EVM test");
    for (const char* suffix : {"stdin", "argv", "trace", "messages"})
        if (!fs::exists(ws.file(c.test_id, suffix)))
            throw UsageError("missing " + ws.file(c.test_id, suffix).string());

    const auto image = read_bytes(c.target);
    const auto stdin_bytes = read_bytes(ws.file(c.test_id, "stdin"));
    const auto argv = split_nul(engine::read_file(ws.file(c.test_id, "argv")));
    const auto trace = engine::parse_trace(engine::read_file(ws.file(c.test_id, "trace")));

    const std::string messages = engine::read_file(ws.file(c.test_id, "messages"));
    const std::string first = messages.substr(0, messages.find('\n'));
    static constexpr std::string_view prefix = "termination: ";
    if (!first.starts_with(prefix))
        throw UsageError("malformed messages file");
    const auto recorded = engine::parse_termination(first.substr(prefix.size()));

    const auto result = native::concrete_replay(image, stdin_bytes, argv);
    const bool match = !result.step_limit && result.trace == trace && result.termination == recorded;
    out << (match ? "MATCH" : "MISMATCH") << "\n";
    if (!match)
        out << "expected " << engine::to_string(recorded) << " after " << trace.size() << " steps, got "
            << engine::to_string(result.termination) << " after " << result.trace.size() << " steps\n";
    return match ? kOk : 1;
}
}  // namespace

std::optional<Config> parse_args(const std::vector<std::string>& args, std::ostream& out)
{
    CLI::App app{"symx: dynamic symbolic execution for MiniVM and EVM bytecode", "symx"};
    app.require_subcommand(1);
    Config c;
    std::string data, policy = "all", memory = "concretize", strategy = "fifo", workspace, solver;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--procs", c.procs, "Exploration workers")->check(CLI::PositiveNumber);
        sub->add_option("--timeout", c.timeout, "Wall clock budget in seconds")->check(CLI::PositiveNumber);
        sub->add_option("--policy", policy, "Concretization policy: all, one, minmax");
        sub->add_option("--strategy", strategy, "State selection: fifo, lifo, random");
        sub->add_option("--seed", c.seed, "Seed for random selection");
        sub->add_option("--workspace", workspace, "Output directory instead of mcore_XXXXXX");
        sub->add_option("--solver", solver, "Solver command line, e.g. \"z3 -in -smt2\"");
    };

    auto* nat = app.add_subcommand("native", "Explore a MiniVM image");
    nat->add_option("target", c.target, "Program image")->required();
    nat->add_option("args", c.argv_specs, "Program arguments; '+' is a symbolic byte");
    nat->add_option("--data", data, "Hex bytes prefixed to stdin");
    nat->add_option("--stdin-size", c.stdin_size, "Symbolic stdin bytes after the prefix");
    nat->add_option("--memory-model", memory, "Symbolic addresses: concretize or symbolic");
    common(nat);

    auto* eth = app.add_subcommand("evm", "Explore EVM bytecode given as hex");
    eth->add_option("target", c.target, "Bytecode hex file")->required();
    eth->add_option("--txlimit", c.txlimit, "Symbolic transactions")->check(CLI::PositiveNumber);
    eth->add_option("--txdatasize", c.txdatasize, "Calldata bytes per transaction");
    eth->add_option("--gas", c.gas, "Gas per transaction");
    eth->add_flag("--detect-overflow", c.detect_overflow, "Report ADD/MUL that can wrap");
    common(eth);

    auto* rep = app.add_subcommand("replay", "Re-run a native test case concretely");
    rep->add_option("target", c.target, "Program image")->required();
    rep->add_option("workspace", workspace, "Workspace directory")->required();
    rep->add_option("test", c.test_id, "Test number")->required();

    // CLI11 reads a bare "++" as a subcommand terminator, but here it means
    // two symbolic bytes. Hide it from the parser and restore it afterwards.
    static const std::string kPlusPlus = "\x01++";
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    std::replace(rev.begin(), rev.end(), std::string("++"), kPlusPlus);
    try
    {
        app.parse(rev);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return std::nullopt;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    }
    catch (const CLI::ParseError& e)
    {
        throw UsageError(e.what());
    }

    std::replace(c.argv_specs.begin(), c.argv_specs.end(), kPlusPlus, std::string("++"));
    c.mode = app.got_subcommand(nat) ? Mode::Native : app.got_subcommand(eth) ? Mode::Evm : Mode::Replay;
    try
    {
        c.policy = engine::parse_policy(policy);
        c.memory_model = native::parse_memory_model(memory);
        c.strategy = engine::parse_strategy(strategy);
    }
    catch (const ParseError& e)
    {
        throw UsageError(e.what());
    }
    if (!data.empty())
        c.data = decode_hex(data, "--data");
    if (!workspace.empty())
        c.workspace = workspace;
    if (!solver.empty())
        c.solver = solver;
    return c;
}

int run(const Config& config, std::ostream& out, std::ostream& err)
{
    try
    {
        switch (config.mode)
        {
        case Mode::Native: return run_native(config, out);
        case Mode::Evm: return run_evm(config, out);
        case Mode::Replay: return run_replay(config, out);
        }
    }
    catch (const UsageError& e)
    {
        err << "symx: " << e.what() << "\n";
        return kUsage;
    }
    catch (const std::exception& e)
    {
        err << "symx: internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::optional<Config> config;
    try
    {
        config = parse_args(args, out);
    }
    catch (const UsageError& e)
    {
        err << "symx: " << e.what() << "\nRun with --help for usage.\n";
        return kUsage;
    }
    return config ? run(*config, out, err) : kOk;
}

}  // namespace symx::cli
