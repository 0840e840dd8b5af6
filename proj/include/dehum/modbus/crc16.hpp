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

#include <array>
#include <cstdint>
#include <span>

namespace dehum::modbus {

namespace detail {

constexpr std::uint16_t crc16_poly{0xA001};

constexpr std::array<std::uint16_t, 256> make_crc16_table() {
    std::array<std::uint16_t, 256> table{};
    for (unsigned i = 0; i < table.size(); ++i) {
        std::uint16_t crc = static_cast<std::uint16_t>(i);
        for (int bit = 0; bit < 8; ++bit)
            crc = (crc & 1u) ? static_cast<std::uint16_t>((crc >> 1) ^ crc16_poly)
                             : static_cast<std::uint16_t>(crc >> 1);
        table[i] = crc;
    }
    return table;
}

inline constexpr auto crc16_table = make_crc16_table();

} // namespace detail

/// Modbus CRC-16: reflected polynomial 0xA001, initial value 0xFFFF, no
/// final XOR. On the wire the low byte goes first.
constexpr std::uint16_t crc16(std::span<const std::uint8_t> bytes) noexcept {
    std::uint16_t crc{0xFFFF};
    for (auto b : bytes)
        crc = static_cast<std::uint16_t>(
                (crc >> 8) ^ detail::crc16_table[(crc ^ b) & 0xFFu]);
    return crc;
}

} // namespace dehum::modbus
