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

#include <atomic>
#include <filesystem>
#include <functional>
#include <future>
#include <list>
#include <mutex>
#include <optional>
#include <thread>

#include <dehum/gateway/auth.hpp>
#include <dehum/gateway/mirror.hpp>
#include <dehum/gateway/poller.hpp>
#include <dehum/net/socket.hpp>
#include <dehum/plant/driver.hpp>

namespace dehum::gateway {

/// Forwards a console command to the plant; empty when the plant is not
/// hosted in this process.
using console_fn = std::function<std::future<plant::command_ack>(plant::bench_command)>;

struct bridge_options {
    net::endpoint listen{"127.0.0.1", 8080};
    std::optional<std::filesystem::path> web_root;
    std::int64_t heartbeat_ms{2000};
};

struct bridge_sources {
    const register_mirror& mirror;
    std::function<link::link_stats()> link_stats_fn;
    std::function<gateway::poll_stats()> poll_stats_fn;
    console_fn console;
    clock_fn clock = steady_ms;
};

/// HTTP listener for the operator dashboard:
///   POST /api/login      {user,password} -> {session_id}
///   GET  /api/registers  registers.json
///   GET  /api/stream     upgrade to a bidirectional message stream:
///                        WebSocket (one JSON message per text frame) or,
///                        with "Upgrade: ndjson", newline-delimited JSON
///   GET  /...            static files from the web root
class monitor_bridge {
public:
    monitor_bridge(bridge_options options, session_manager& sessions,
            bridge_sources sources);
    ~monitor_bridge();

    std::uint16_t port() const noexcept { return port_; }
    void start();
    void stop();

private:
    class stream;

    void serve(net::socket_fd& conn);
    void run_stream(int fd, std::string& buffer, const session& s, bool websocket);
    std::string handle_login(const std::string& body);
    std::optional<std::string> static_file(const std::string& path) const;

    bridge_options options_;
    session_manager& sessions_;
    bridge_sources sources_;
    net::socket_fd listener_;
    std::uint16_t port_;
    std::atomic<bool> running_{false};
    std::thread acceptor_;

    struct connection {
        net::socket_fd socket;
        std::thread worker;
    };
    std::mutex conns_mutex_;
    std::list<connection> conns_;
};

} // namespace dehum::gateway
