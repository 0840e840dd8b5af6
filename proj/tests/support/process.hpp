/*
   Copyright 2026 The dehum-bench Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

// Spawning the dehum binary from tests.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace testproc {

struct result {
    int exit_code{-1};
    std::string out;
    std::string err;
};

/// A child process with captured stdout and stderr.
class child {
public:
    child(const std::vector<std::string>& argv,
            const std::vector<std::pair<std::string, std::string>>& env = {}) {
        int out_pipe[2], err_pipe[2];
        if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
            throw std::runtime_error("pipe failed");
        pid_ = fork();
        if (pid_ < 0)
            throw std::runtime_error("fork failed");
        if (pid_ == 0) {
            dup2(out_pipe[1], STDOUT_FILENO);
            dup2(err_pipe[1], STDERR_FILENO);
            close(out_pipe[0]);
            close(err_pipe[0]);
            for (const auto& [k, v] : env)
                setenv(k.c_str(), v.c_str(), 1);
            std::vector<char*> args;
            for (const auto& a : argv)
                args.push_back(const_cast<char*>(a.c_str()));
            args.push_back(nullptr);
            execv(args[0], args.data());
            _exit(127);
        }
        close(out_pipe[1]);
        close(err_pipe[1]);
        out_fd_ = out_pipe[0];
        err_fd_ = err_pipe[0];
    }

    ~child() {
        if (pid_ > 0 && !reaped_) {
            kill(pid_, SIGKILL);
            waitpid(pid_, nullptr, 0);
        }
        close(out_fd_);
        close(err_fd_);
    }

    child(const child&) = delete;
    child& operator=(const child&) = delete;

    /// Reads stdout until `pattern` matches or the timeout passes.
    /// Returns the capture groups, [0] being the whole match.
    std::optional<std::vector<std::string>> wait_for(const std::regex& pattern,
            std::chrono::milliseconds timeout) {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        for (;;) {
            std::smatch m;
            if (std::regex_search(out_, m, pattern))
                return std::vector<std::string>(m.begin(), m.end());
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now());
            if (left.count() <= 0 || !pump(static_cast<int>(left.count())))
                return std::nullopt;
        }
    }

    void signal(int sig) { kill(pid_, sig); }

    result finish(std::chrono::milliseconds timeout = std::chrono::seconds(10)) {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        while (pump(50) || std::chrono::steady_clock::now() < deadline) {
            int status = 0;
            if (waitpid(pid_, &status, WNOHANG) == pid_) {
                reaped_ = true;
                while (pump(20)) {
                }
                return {WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status), out_,
                        err_};
            }
        }
        return {-1, out_, err_};
    }

    const std::string& out() const { return out_; }

private:
    // Returns false once both pipes are at EOF or nothing arrived in time.
    bool pump(int timeout_ms) {
        pollfd fds[2] = {{out_fd_, POLLIN, 0}, {err_fd_, POLLIN, 0}};
        if (poll(fds, 2, timeout_ms) <= 0)
            return false;
        bool any = false;
        char buf[4096];
        for (int i = 0; i < 2; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP)))
                continue;
            const auto n = read(fds[i].fd, buf, sizeof buf);
            if (n > 0) {
                (i == 0 ? out_ : err_).append(buf, static_cast<std::size_t>(n));
                any = true;
            }
        }
        return any;
    }

    pid_t pid_{-1};
    int out_fd_{-1};
    int err_fd_{-1};
    bool reaped_{false};
    std::string out_;
    std::string err_;
};

inline result run(const std::vector<std::string>& argv,
        const std::vector<std::pair<std::string, std::string>>& env = {},
        std::chrono::milliseconds timeout = std::chrono::seconds(20)) {
    child c(argv, env);
    return c.finish(timeout);
}

/// A `dehum bench` child with its announced ports.
struct bench {
    child proc;
    std::uint16_t modbus_port{};
    std::uint16_t bridge_port{};

    bench(const std::string& binary, std::vector<std::string> extra)
        : proc([&] {
              std::vector<std::string> argv{binary};
              argv.insert(argv.end(), extra.begin(), extra.end());
              return argv;
          }()) {
        auto m = proc.wait_for(std::regex(R"(modbus listening on [^:]+:(\d+)\n[\s\S]*bridge listening on [^:]+:(\d+)\n)"),
                std::chrono::seconds(10));
        if (!m)
            throw std::runtime_error("bench did not start: " + proc.out());
        modbus_port = static_cast<std::uint16_t>(std::stoi((*m)[1]));
        bridge_port = static_cast<std::uint16_t>(std::stoi((*m)[2]));
    }
};

} // namespace testproc
