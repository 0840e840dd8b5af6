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
#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <span>
#include <thread>

#include <dehum/gateway/mirror.hpp>
#include <dehum/modbus/framing.hpp>
#include <dehum/net/socket.hpp>

namespace dehum::gateway {

/// Answers one Modbus TCP request from the mirror. Reads never touch the
/// serial link; writes to the test register are queued for the poller.
modbus::mbap_frame serve_modbus_tcp(const modbus::mbap_frame& request,
        const register_mirror& mirror, write_queue& writes);

/// Byte-level wrapper: nullopt means the ADU was malformed at the MBAP
/// level and the connection must be closed. PDU-level problems become
/// exception responses.
std::optional<modbus::bytes> serve_modbus_tcp_adu(
        std::span<const std::uint8_t> adu, const register_mirror& mirror,
        write_queue& writes);

/// Plain, unauthenticated Modbus TCP listener (port 502 by default), one
/// thread per client connection.
class modbus_tcp_server {
public:
    modbus_tcp_server(const net::endpoint& listen_at, const register_mirror& mirror,
            write_queue& writes);
    ~modbus_tcp_server();

    std::uint16_t port() const noexcept { return port_; }
    void start();
    void stop();

private:
    void serve(net::socket_fd& conn);

    net::socket_fd listener_;
    std::uint16_t port_;
    const register_mirror& mirror_;
    write_queue& writes_;
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
