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
#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include <dehum/clock.hpp>
#include <dehum/link/virtual_link.hpp>
#include <dehum/net/socket.hpp>

namespace dehum::link {

/// Master side of the serial segment: one request out, at most one reply
/// back within the timeout.
class rtu_transport {
public:
    virtual ~rtu_transport() = default;

    virtual std::optional<bytes> exchange(std::span<const std::uint8_t> request,
            std::chrono::milliseconds timeout) = 0;

    virtual link_stats stats() const = 0;
};

using slave_handler =
        std::function<std::optional<bytes>(std::span<const std::uint8_t>)>;

/// Real-time master over a virtual_link. Replies that arrive after their
/// request timed out are flushed before the next request goes out.
class link_master_transport final : public rtu_transport {
public:
    explicit link_master_transport(virtual_link& link) : link_(link) {}

    std::optional<bytes> exchange(std::span<const std::uint8_t> request,
            std::chrono::milliseconds timeout) override;
    link_stats stats() const override { return link_.stats(); }

private:
    virtual_link& link_;
};

/// Services the slave end of a virtual_link on its own thread.
class slave_endpoint {
public:
    slave_endpoint(virtual_link& link, slave_handler handler);
    ~slave_endpoint();

    void start();
    void stop();

private:
    virtual_link& link_;
    slave_handler handler_;
    std::atomic<bool> running_{false};
    std::thread worker_;
};

/// Accelerated transport: the slave runs inline and time is a
/// virtual_clock advanced by the link delay (or by the timeout when the
/// exchange fails).
class simulated_transport final : public rtu_transport {
public:
    simulated_transport(const link_config& config, slave_handler handler,
            virtual_clock& clock);

    std::optional<bytes> exchange(std::span<const std::uint8_t> request,
            std::chrono::milliseconds timeout) override;
    link_stats stats() const override;

private:
    impairment to_slave_;
    impairment to_master_;
    slave_handler handler_;
    virtual_clock& clock_;
};

// Serial tunnel: RTU frames carried over TCP as [len_hi][len_lo][frame...],
// so the plant and the gateway can run as separate processes.

void write_tunnel_frame(int fd, std::span<const std::uint8_t> frame);
std::optional<bytes> read_tunnel_frame(int fd, int timeout_ms);

/// Gateway end of the tunnel. Impairment for both directions is applied
/// here; the far end is a clean wire.
class tunnel_transport final : public rtu_transport {
public:
    tunnel_transport(net::endpoint remote, const link_config& config);

    std::optional<bytes> exchange(std::span<const std::uint8_t> request,
            std::chrono::milliseconds timeout) override;
    link_stats stats() const override;

private:
    net::endpoint remote_;
    link_config config_;
    mutable std::mutex mutex_;
    impairment to_slave_;
    impairment to_master_;
    net::socket_fd socket_;
};

/// Plant end of the tunnel: accepts gateway connections and answers each
/// frame through the handler.
class tunnel_server {
public:
    tunnel_server(const net::endpoint& listen_at, slave_handler handler);
    ~tunnel_server();

    std::uint16_t port() const noexcept { return port_; }
    void start();
    void stop();

private:
    void serve(net::socket_fd conn);

    net::socket_fd listener_;
    std::uint16_t port_;
    slave_handler handler_;
    std::atomic<bool> running_{false};
    std::thread acceptor_;
    std::mutex conns_mutex_;
    std::vector<std::thread> conns_;
};

} // namespace dehum::link
