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

// Reference implementations written independently of the library code,
// plus random generators shared by unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <dehum/modbus/pdu.hpp>

namespace oracle {

/// Bit-serial CRC-16/MODBUS: reflected poly 0xA001, init 0xFFFF, no xorout.
inline std::uint16_t crc16_bitwise(std::span<const std::uint8_t> data) {
    std::uint16_t crc = 0xFFFF;
    for (auto b : data) {
        crc ^= b;
        for (int i = 0; i < 8; ++i)
            crc = (crc & 1) ? static_cast<std::uint16_t>((crc >> 1) ^ 0xA001)
                            : static_cast<std::uint16_t>(crc >> 1);
    }
    return crc;
}

/// Alarm bit per fault name, in wire order.
struct alarm_bit {
    const char* name;
    std::uint16_t mask;
};
inline constexpr alarm_bit alarm_table[] = {
    {"EMERGENCY", 0x0001},
    {"SAFETY_THERMOSTAT", 0x0002},
    {"MOTOR_OVERLOAD", 0x0004},
    {"REACT_SENSOR", 0x0008},
    {"POST_HEATER", 0x0010},
    {"DIFF_PRESSURE", 0x0020},
};

/// Register word for a scaled engineering value: round half away from zero,
/// then two's complement for signed registers.
inline std::uint16_t encode_scaled(double value, int scale, bool is_signed) {
    const long long n = std::llround(value * scale);
    if (is_signed)
        return static_cast<std::uint16_t>(static_cast<std::int16_t>(n));
    return static_cast<std::uint16_t>(n);
}

inline double decode_scaled(std::uint16_t raw, int scale, bool is_signed) {
    const long long n = is_signed ? static_cast<std::int16_t>(raw) : raw;
    return static_cast<double>(n) / scale;
}

/// First-order response after t seconds from x0 toward target.
inline double relax(double x0, double target, double t, double tau) {
    return target + (x0 - target) * std::exp(-t / tau);
}

// ---- random PDUs ----

inline std::vector<std::uint16_t> random_words(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::uint16_t> v(n);
    for (auto& w : v)
        w = static_cast<std::uint16_t>(rng());
    return v;
}

inline dehum::modbus::pdu random_pdu(std::mt19937_64& rng, dehum::modbus::direction dir) {
    using namespace dehum::modbus;
    auto u16 = [&] { return static_cast<std::uint16_t>(rng()); };
    auto in = [&](std::size_t lo, std::size_t hi) {
        return static_cast<std::size_t>(
                std::uniform_int_distribution<std::size_t>(lo, hi)(rng));
    };
    if (dir == direction::request) {
        switch (in(0, 2)) {
        case 0: return read_holding_request{u16(), static_cast<std::uint16_t>(in(1, 125))};
        case 1: return write_single_request{u16(), u16()};
        default: return write_multiple_request{u16(), random_words(rng, in(1, 123))};
        }
    }
    switch (in(0, 3)) {
    case 0: return read_holding_response{random_words(rng, in(1, 125))};
    case 1: return write_single_response{u16(), u16()};
    case 2: return write_multiple_response{u16(), static_cast<std::uint16_t>(in(1, 123))};
    default: {
        const std::uint8_t fcs[] = {0x03, 0x06, 0x10};
        return exception_response{fcs[in(0, 2)], static_cast<exception_code>(in(1, 4))};
    }
    }
}

} // namespace oracle
