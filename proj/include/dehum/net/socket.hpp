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

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dehum::net {

enum class net_errc { port_in_use, connection_refused, resolve_failed, io_error };

const char* to_string(net_errc errc) noexcept;

class net_error : public std::runtime_error {
public:
    net_error(net_errc errc, const std::string& detail);
    net_errc code() const noexcept { return errc_; }

private:
    net_errc errc_;
};

/// Owning POSIX file descriptor.
class socket_fd {
public:
    socket_fd() = default;
    explicit socket_fd(int fd) noexcept : fd_(fd) {}
    ~socket_fd() { close(); }

    socket_fd(socket_fd&& o) noexcept : fd_(o.release()) {}
    socket_fd& operator=(socket_fd&& o) noexcept {
        if (this != &o) {
            close();
            fd_ = o.release();
        }
        return *this;
    }
    socket_fd(const socket_fd&) = delete;
    socket_fd& operator=(const socket_fd&) = delete;

    int get() const noexcept { return fd_; }
    bool valid() const noexcept { return fd_ >= 0; }
    int release() noexcept {
        int fd = fd_;
        fd_ = -1;
        return fd;
    }
    void close() noexcept;
    /// Wakes any thread blocked reading this socket without releasing it.
    void shutdown() noexcept;

private:
    int fd_{-1};
};

struct endpoint {
    std::string host{"127.0.0.1"};
    std::uint16_t port{0};

    /// "host:port", ":port", "port" or "host". Missing parts keep defaults.
    static endpoint parse(std::string_view text, const endpoint& defaults);
    static endpoint parse(std::string_view text) { return parse(text, endpoint{}); }
    std::string to_string() const;
};

socket_fd listen_tcp(const endpoint& ep, int backlog = 64);
std::uint16_t local_port(const socket_fd& s);

socket_fd connect_tcp(const endpoint& ep,
        std::chrono::milliseconds timeout = std::chrono::seconds(5));

/// Waits for the listener; nullopt on timeout.
std::optional<socket_fd> accept_for(const socket_fd& listener, int timeout_ms);

/// Waits up to timeout_ms (-1: forever) for readable data or EOF.
bool wait_readable(int fd, int timeout_ms);

/// False on EOF, error or timeout (timeout_ms applies per wait, -1 forever).
bool read_exact(int fd, std::span<std::uint8_t> dst, int timeout_ms = -1);

/// Reads up to and including '\n' (stripped). False on EOF/error.
bool read_line(int fd, std::string& line, std::string& buffer,
        std::size_t max_len = 1 << 16);

/// Throws net_error(io_error) if the peer has gone away.
void write_all(int fd, std::span<const std::uint8_t> src);
void write_all(int fd, std::string_view src);

} // namespace dehum::net
