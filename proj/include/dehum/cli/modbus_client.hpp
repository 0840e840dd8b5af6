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
#include <variant>
#include <vector>

#include <dehum/modbus/pdu.hpp>
#include <dehum/net/socket.hpp>

namespace dehum::cli {

/// Either the decoded reply or the exception the server answered with.
template <typename T>
using modbus_result = std::variant<T, modbus::exception_code>;

/// Blocking Modbus TCP master over a single connection. Transport and
/// framing failures surface as net_error or codec_error.
class modbus_tcp_client {
public:
    modbus_tcp_client(const net::endpoint& server, std::uint8_t unit_id = 1,
            std::chrono::milliseconds timeout = std::chrono::seconds(3));

    modbus_result<std::vector<std::uint16_t>> read_holding(std::uint16_t start,
            std::uint16_t quantity);
    modbus_result<modbus::write_single_response> write_single(std::uint16_t address,
            std::uint16_t value);
    modbus_result<modbus::write_multiple_response> write_multiple(std::uint16_t start,
            std::vector<std::uint16_t> values);

private:
    modbus::pdu transact(const modbus::pdu& request);

    net::socket_fd socket_;
    std::uint8_t unit_id_;
    std::chrono::milliseconds timeout_;
    std::uint16_t next_tid_{1};
};

} // namespace dehum::cli
