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

#include <cstdint>
#include <span>

#include <dehum/modbus/pdu.hpp>

namespace dehum::modbus {

constexpr std::size_t rtu_min_size{4};
constexpr std::uint8_t min_unit_id{1};
constexpr std::uint8_t max_unit_id{247};

/// Serial-line ADU: [unit][pdu...][crc_lo][crc_hi]. The CRC is derived from
/// the other fields and is not stored.
struct rtu_frame {
    std::uint8_t unit_id{1};
    pdu body;
    bool operator==(const rtu_frame&) const = default;
};

bytes encode_rtu(const rtu_frame& frame);

/// Verifies the CRC before looking at any other byte. A frame that fails
/// the check is never partially interpreted.
rtu_frame decode_rtu(std::span<const std::uint8_t> src, direction dir);

constexpr std::size_t mbap_header_size{7};
constexpr std::uint16_t modbus_protocol_id{0};

struct mbap_header {
    std::uint16_t transaction_id{};
    std::uint16_t protocol_id{};
    std::uint16_t length{};
    std::uint8_t unit_id{};
};

/// Parses the 7-byte header only; used by stream readers to learn how many
/// PDU bytes follow. Validates the protocol id and the length bounds.
mbap_header parse_mbap_header(std::span<const std::uint8_t> src);

/// TCP ADU: [tid_hi][tid_lo][0][0][len_hi][len_lo][unit][pdu...], where
/// len counts the unit byte plus the PDU.
struct mbap_frame {
    std::uint16_t transaction_id{};
    std::uint8_t unit_id{};
    pdu body;
    bool operator==(const mbap_frame&) const = default;
};

bytes encode_mbap(const mbap_frame& frame);
mbap_frame decode_mbap(std::span<const std::uint8_t> src, direction dir);

} // namespace dehum::modbus
