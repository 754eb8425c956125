// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symx/engine/engine.hpp"

#include <atomic>
#include <filesystem>
#include <string>

namespace symx::engine
{
/// Output directory with one file group per persisted state:
/// test_NNNNNNNN.{trace,smt,messages} plus the backend's own files.
class Workspace : public TestcaseSink
{
public:
    /// Creates (if needed) and uses `dir`.
    explicit Workspace(std::filesystem::path dir);

    /// Fresh "mcore_<6 random lowercase alphanumerics>" directory under `parent`.
    static Workspace create_unique(const std::filesystem::path& parent);

    Workspace(Workspace&& other) noexcept : dir_{std::move(other.dir_)}, next_{other.next_.load()} {}

    void save(const State& state, const std::optional<Model>& model, const Platform& platform) override;

    /// Every file of one test case keyed by suffix, without writing anything.
    static TestcaseFiles render(const State& state, const std::optional<Model>& model, const Platform& platform);
    /// Writes `files` under the next free id and returns that id.
    std::size_t store(const TestcaseFiles& files);

    const std::filesystem::path& path() const noexcept { return dir_; }
    std::size_t count() const noexcept { return next_.load(); }

    /// "test_00000007" for id 7.
    static std::string test_name(std::size_t id);
    std::filesystem::path file(std::size_t id, std::string_view suffix) const;

    /// Writes a workspace-level file (coverage, findings, ...).
    void write(std::string_view name, std::string_view content) const;

private:
    std::filesystem::path dir_;
    std::atomic<std::size_t> next_{0};
};

/// SMT-LIB script of the state followed by "; model name = value" lines.
std::string render_smt(const State& state, const std::optional<Model>& model);

/// First line "termination: <reason>", then one line per state message.
std::string render_messages(const State& state);

/// One hex location per line.
std::string render_trace(const std::vector<std::uint64_t>& trace);
std::vector<std::uint64_t> parse_trace(std::string_view text);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

}  // namespace symx::engine
