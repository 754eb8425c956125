// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <sys/types.h>

namespace symx
{
/// Child process with piped stdin/stdout (stderr folded into stdout).
class ChildProcess
{
public:
    /// Throws std::system_error if the pipes or fork fail. A failed exec
    /// shows up as EOF on the first read.
    explicit ChildProcess(const std::vector<std::string>& argv);
    ~ChildProcess();
    ChildProcess(const ChildProcess&) = delete;
    ChildProcess& operator=(const ChildProcess&) = delete;

    /// Returns false if the child closed its input.
    bool write(const std::string& data);

    /// Reads one line (without '\n'). nullopt on EOF or deadline.
    std::optional<std::string> read_line(std::chrono::steady_clock::time_point deadline);

    bool timed_out() const noexcept { return timed_out_; }

    void close_input();
    /// Kills (SIGKILL) and reaps the child.
    void kill();

private:
    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buffer_;
    bool timed_out_ = false;
};

}  // namespace symx
