// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/engine/workspace.hpp"

#include "symx/error.hpp"
#include "symx/smt/smtlib.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace symx::engine
{
namespace fs = std::filesystem;

std::string read_file(const fs::path& p)
{
    std::ifstream in{p, std::ios::binary};
    if (!in)
        throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, std::string_view content)
{
    std::ofstream out{p, std::ios::binary | std::ios::trunc};
    if (!out)
        throw Error("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw Error("short write to " + p.string());
}

Workspace::Workspace(fs::path dir) : dir_{std::move(dir)}
{
    fs::create_directories(dir_);
}

Workspace Workspace::create_unique(const fs::path& parent)
{
    static constexpr char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::random_device rd;
    std::mt19937 rng{rd()};
    std::uniform_int_distribution<int> pick(0, 35);
    for (int attempt = 0; attempt < 100; ++attempt)
    {
        std::string name = "mcore_";
        for (int i = 0; i < 6; ++i)
            name += alphabet[pick(rng)];
        const fs::path candidate = parent / name;
        std::error_code ec;
        if (fs::create_directories(candidate, ec))
            return Workspace{candidate};
    }
    throw Error("cannot create a workspace directory under " + parent.string());
}

std::string Workspace::test_name(std::size_t id)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "test_%08zu", id);
    return buf;
}

fs::path Workspace::file(std::size_t id, std::string_view suffix) const
{
    return dir_ / (test_name(id) + "." + std::string(suffix));
}

void Workspace::write(std::string_view name, std::string_view content) const
{
    write_file(dir_ / std::string(name), content);
}

void Workspace::save(const State& state, const std::optional<Model>& model, const Platform& platform)
{
    store(render(state, model, platform));
}

TestcaseFiles Workspace::render(const State& state, const std::optional<Model>& model, const Platform& platform)
{
    TestcaseFiles files;
    if (model)
        files = platform.render_testcase(state, *model);
    files["trace"] = render_trace(state.trace());
    files["smt"] = render_smt(state, model);
    files["messages"] = render_messages(state);
    return files;
}

std::size_t Workspace::store(const TestcaseFiles& files)
{
    const std::size_t id = next_.fetch_add(1);
    for (const auto& [suffix, content] : files)
        write_file(file(id, suffix), content);
    return id;
}

std::string render_smt(const State& state, const std::optional<Model>& model)
{
    std::string out = smt::to_smtlib(state.constraints());
    if (!model)
        return out + "; model unavailable\n";
    for (const auto& [name, value] : *model)
    {
        const auto& decls = state.constraints().declarations();
        const auto it = decls.find(name);
        const unsigned width = it != decls.end() && it->second.is_bitvec() ? it->second.width() : 256;
        out += "; model " + name + " = " + smt::literal_to_smtlib(smt::Expr::constant(value, width)) + "\n";
    }
    return out;
}

std::string render_messages(const State& state)
{
    std::string out = "termination: ";
    out += state.termination() ? to_string(*state.termination()) : "none";
    out += "\n";
    out += "state: " + std::to_string(state.id()) + "\n";
    for (const auto& m : state.messages())
        out += m + "\n";
    return out;
}

std::string render_trace(const std::vector<std::uint64_t>& trace)
{
    std::string out;
    char buf[24];
    for (auto loc : trace)
    {
        std::snprintf(buf, sizeof buf, "0x%llx\n", static_cast<unsigned long long>(loc));
        out += buf;
    }
    return out;
}

std::vector<std::uint64_t> parse_trace(std::string_view text)
{
    std::vector<std::uint64_t> out;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);)
    {
        if (line.empty())
            continue;
        try
        {
            out.push_back(std::stoull(line, nullptr, 16));
        }
        catch (const std::exception&)
        {
            throw ParseError("bad trace line: " + line);
        }
    }
    return out;
}

}  // namespace symx::engine
