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

#include <dehum/link/transport.hpp>

#include <unistd.h>

namespace dehum::link {

using namespace std::chrono_literals;

std::optional<bytes> link_master_transport::exchange(
        std::span<const std::uint8_t> request, std::chrono::milliseconds timeout) {
    link_.to_master().clear();
    link_.to_slave().send(request);
    return link_.to_master().receive(timeout);
}

slave_endpoint::slave_endpoint(virtual_link& link, slave_handler handler)
    : link_(link), handler_(std::move(handler)) {}

slave_endpoint::~slave_endpoint() {
    stop();
}

void slave_endpoint::start() {
    if (running_.exchange(true))
        return;
    worker_ = std::thread([this] {
        while (running_) {
            auto frame = link_.to_slave().receive(100ms);
            if (!frame)
                continue;
            if (auto reply = handler_(*frame))
                link_.to_master().send(*reply);
        }
    });
}

void slave_endpoint::stop() {
    running_ = false;
    if (worker_.joinable())
        worker_.join();
}

simulated_transport::simulated_transport(const link_config& config,
        slave_handler handler, virtual_clock& clock)
    : to_slave_(config, master_to_slave_stream),
      to_master_(config, slave_to_master_stream),
      handler_(std::move(handler)),
      clock_(clock) {}

std::optional<bytes> simulated_transport::exchange(
        std::span<const std::uint8_t> request, std::chrono::milliseconds timeout) {
    const auto start = clock_.now();
    const auto give_up = [&]() -> std::optional<bytes> {
        clock_.set(start + timeout.count());
        return std::nullopt;
    };
    const auto delay = to_slave_.config().delay_ms;

    auto out = to_slave_.transmit(request);
    auto* req = std::get_if<delivered>(&out);
    if (!req)
        return give_up();
    auto reply = handler_(req->data);
    if (!reply)
        return give_up();
    auto back = to_master_.transmit(*reply);
    auto* rsp = std::get_if<delivered>(&back);
    if (!rsp || 2 * delay > timeout.count())
        return give_up();
    clock_.advance(2 * delay);
    return std::move(rsp->data);
}

link_stats simulated_transport::stats() const {
    auto total = to_slave_.stats();
    total += to_master_.stats();
    return total;
}

void write_tunnel_frame(int fd, std::span<const std::uint8_t> frame) {
    bytes out;
    out.reserve(frame.size() + 2);
    out.push_back(static_cast<std::uint8_t>(frame.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(frame.size() & 0xFF));
    out.insert(out.end(), frame.begin(), frame.end());
    net::write_all(fd, out);
}

std::optional<bytes> read_tunnel_frame(int fd, int timeout_ms) {
    std::uint8_t header[2];
    if (!net::read_exact(fd, header, timeout_ms))
        return std::nullopt;
    bytes frame((header[0] << 8) | header[1]);
    if (!net::read_exact(fd, frame, timeout_ms))
        return std::nullopt;
    return frame;
}

tunnel_transport::tunnel_transport(net::endpoint remote, const link_config& config)
    : remote_(std::move(remote)),
      config_(config),
      to_slave_(config, master_to_slave_stream),
      to_master_(config, slave_to_master_stream) {}

std::optional<bytes> tunnel_transport::exchange(
        std::span<const std::uint8_t> request, std::chrono::milliseconds timeout) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + timeout;
    const auto wait_out = [&]() -> std::optional<bytes> {
        std::this_thread::sleep_until(deadline);
        return std::nullopt;
    };

    std::unique_lock lock(mutex_);
    auto out = to_slave_.transmit(request);
    auto* req = std::get_if<delivered>(&out);
    if (!req) {
        lock.unlock();
        return wait_out();
    }
    try {
        if (!socket_.valid())
            socket_ = net::connect_tcp(remote_, timeout);
        // Discard replies to earlier requests that timed out.
        while (net::wait_readable(socket_.get(), 0))
            if (!read_tunnel_frame(socket_.get(), 0))
                throw net::net_error(net::net_errc::io_error, "tunnel closed");
        std::this_thread::sleep_for(std::chrono::milliseconds(config_.delay_ms));
        write_tunnel_frame(socket_.get(), req->data);
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                deadline - clock::now());
        auto reply = read_tunnel_frame(socket_.get(),
                static_cast<int>(std::max<std::int64_t>(left.count(), 0)));
        if (!reply)
            return std::nullopt;
        auto back = to_master_.transmit(*reply);
        auto* rsp = std::get_if<delivered>(&back);
        std::this_thread::sleep_for(std::chrono::milliseconds(config_.delay_ms));
        if (!rsp || clock::now() > deadline)
            return std::nullopt;
        return std::move(rsp->data);
    } catch (const net::net_error&) {
        socket_.close();
        lock.unlock();
        return wait_out();
    }
}

link_stats tunnel_transport::stats() const {
    std::lock_guard lock(mutex_);
    auto total = to_slave_.stats();
    total += to_master_.stats();
    return total;
}

tunnel_server::tunnel_server(const net::endpoint& listen_at, slave_handler handler)
    : listener_(net::listen_tcp(listen_at)),
      port_(net::local_port(listener_)),
      handler_(std::move(handler)) {}

tunnel_server::~tunnel_server() {
    stop();
}

void tunnel_server::start() {
    if (running_.exchange(true))
        return;
    acceptor_ = std::thread([this] {
        while (running_) {
            auto conn = net::accept_for(listener_, 100);
            if (!conn)
                continue;
            std::lock_guard lock(conns_mutex_);
            conns_.emplace_back(
                    [this, c = std::move(*conn)]() mutable { serve(std::move(c)); });
        }
    });
}

void tunnel_server::serve(net::socket_fd conn) {
    while (running_) {
        if (!net::wait_readable(conn.get(), 100))
            continue;
        auto frame = read_tunnel_frame(conn.get(), 1000);
        if (!frame)
            return;
        auto reply = handler_(*frame);
        if (!reply)
            continue;
        try {
            write_tunnel_frame(conn.get(), *reply);
        } catch (const net::net_error&) {
            return;
        }
    }
}

void tunnel_server::stop() {
    if (!running_.exchange(false))
        return;
    if (acceptor_.joinable())
        acceptor_.join();
    std::lock_guard lock(conns_mutex_);
    for (auto& t : conns_)
        if (t.joinable())
            t.join();
    conns_.clear();
}

} // namespace dehum::link
