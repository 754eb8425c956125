// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/util/process.hpp"

#include <cerrno>
#include <csignal>
#include <system_error>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace symx
{
namespace
{
void set_cloexec(int fd)
{
    ::fcntl(fd, F_SETFD, FD_CLOEXEC);
}
}  // namespace

ChildProcess::ChildProcess(const std::vector<std::string>& argv)
{
    if (argv.empty())
        throw std::system_error(std::make_error_code(std::errc::invalid_argument), "empty command");
    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0)
        throw std::system_error(errno, std::generic_category(), "pipe");
    if (::pipe(from_child) != 0)
    {
        ::close(to_child[0]);
        ::close(to_child[1]);
        throw std::system_error(errno, std::generic_category(), "pipe");
    }
    // Writing to a dead solver must not kill the host.
    ::signal(SIGPIPE, SIG_IGN);

    std::vector<char*> args;
    for (const auto& a : argv)
        args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_ = ::fork();
    if (pid_ < 0)
        throw std::system_error(errno, std::generic_category(), "fork");
    if (pid_ == 0)
    {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::dup2(from_child[1], STDERR_FILENO);
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        ::execvp(args[0], args.data());
        ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
    set_cloexec(in_fd_);
    set_cloexec(out_fd_);
}

ChildProcess::~ChildProcess()
{
    kill();
}

bool ChildProcess::write(const std::string& data)
{
    std::size_t done = 0;
    while (done < data.size())
    {
        const ssize_t n = ::write(in_fd_, data.data() + done, data.size() - done);
        if (n < 0)
        {
            if (errno == EINTR)
                continue;
            return false;
        }
        done += static_cast<std::size_t>(n);
    }
    return true;
}

std::optional<std::string> ChildProcess::read_line(std::chrono::steady_clock::time_point deadline)
{
    for (;;)
    {
        if (auto nl = buffer_.find('\n'); nl != std::string::npos)
        {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            return line;
        }
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline)
        {
            timed_out_ = true;
            return std::nullopt;
        }
        const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        pollfd pfd{out_fd_, POLLIN, 0};
        const int r = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(wait, 1000)));
        if (r < 0 && errno == EINTR)
            continue;
        if (r <= 0)
            continue;
        char chunk[4096];
        const ssize_t n = ::read(out_fd_, chunk, sizeof chunk);
        if (n < 0 && errno == EINTR)
            continue;
        if (n <= 0)
        {
            if (!buffer_.empty())
            {
                std::string rest = std::move(buffer_);
                buffer_.clear();
                return rest;
            }
            return std::nullopt;
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

void ChildProcess::close_input()
{
    if (in_fd_ >= 0)
    {
        ::close(in_fd_);
        in_fd_ = -1;
    }
}

void ChildProcess::kill()
{
    close_input();
    if (out_fd_ >= 0)
    {
        ::close(out_fd_);
        out_fd_ = -1;
    }
    if (pid_ > 0)
    {
        ::kill(pid_, SIGKILL);
        int status = 0;
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
    }
}

}  // namespace symx
