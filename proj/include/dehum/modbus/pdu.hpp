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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace dehum::modbus {

using bytes = std::vector<std::uint8_t>;

enum class function_code : std::uint8_t {
    read_holding_registers = 0x03,
    write_single_register = 0x06,
    write_multiple_registers = 0x10,
};

constexpr std::uint8_t exception_flag{0x80};

enum class exception_code : std::uint8_t {
    illegal_function = 0x01,
    illegal_data_address = 0x02,
    illegal_data_value = 0x03,
    slave_device_failure = 0x04,
};

/// Name used in CLI output and bridge messages, e.g. "IllegalDataAddress".
std::string_view to_string(exception_code code) noexcept;

// Modbus Application Protocol V1.1b3, 6.3 and 6.12.
constexpr std::size_t min_read_registers{1};
constexpr std::size_t max_read_registers{125};
constexpr std::size_t min_write_registers{1};
constexpr std::size_t max_write_registers{123};

constexpr std::size_t max_pdu_size{253};

struct read_holding_request {
    std::uint16_t start{};
    std::uint16_t quantity{};
    bool operator==(const read_holding_request&) const = default;
};

struct read_holding_response {
    std::vector<std::uint16_t> values;
    bool operator==(const read_holding_response&) const = default;
};

struct write_single_request {
    std::uint16_t address{};
    std::uint16_t value{};
    bool operator==(const write_single_request&) const = default;
};

struct write_single_response {
    std::uint16_t address{};
    std::uint16_t value{};
    bool operator==(const write_single_response&) const = default;
};

struct write_multiple_request {
    std::uint16_t start{};
    std::vector<std::uint16_t> values;
    bool operator==(const write_multiple_request&) const = default;
};

struct write_multiple_response {
    std::uint16_t start{};
    std::uint16_t quantity{};
    bool operator==(const write_multiple_response&) const = default;
};

/// `function` is the original (request) function code; the high bit is
/// added on the wire.
struct exception_response {
    std::uint8_t function{};
    exception_code code{};
    bool operator==(const exception_response&) const = default;
};

using pdu = std::variant<read_holding_request, read_holding_response,
        write_single_request, write_single_response, write_multiple_request,
        write_multiple_response, exception_response>;

/// Function code 0x03 has different request and response layouts, so the
/// decoder needs to know which side of the exchange it is looking at.
enum class direction { request, response };

/// Throws codec_error(invalid_pdu) when the PDU violates its invariants.
bytes encode_pdu(const pdu& p);
void encode_pdu(const pdu& p, bytes& out);

/// Strict decoder: the PDU must consume `src` exactly.
pdu decode_pdu(std::span<const std::uint8_t> src, direction dir);

/// Function code a PDU travels under on the wire (with exception flag).
std::uint8_t wire_function(const pdu& p) noexcept;

} // namespace dehum::modbus
