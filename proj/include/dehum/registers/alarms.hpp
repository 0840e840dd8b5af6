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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dehum::registers {

/// Bit positions in the ALARMS word.
enum class fault : std::uint8_t {
    emergency = 0,
    safety_thermostat = 1,
    motor_overload = 2,
    react_sensor = 3,
    post_heater = 4,
    diff_pressure = 5,
};

constexpr std::size_t fault_count{6};
constexpr std::uint16_t alarm_reserved_mask{0xFFC0};

constexpr std::array<fault, fault_count> all_faults{fault::emergency,
        fault::safety_thermostat, fault::motor_overload, fault::react_sensor,
        fault::post_heater, fault::diff_pressure};

/// "EMERGENCY", "SAFETY_THERMOSTAT", ...
std::string_view fault_name(fault f) noexcept;

/// Case-insensitive; '-' and '_' are interchangeable.
std::optional<fault> parse_fault(std::string_view name) noexcept;

class fault_set {
public:
    constexpr fault_set() = default;
    constexpr fault_set(std::initializer_list<fault> faults) {
        for (auto f : faults)
            set(f);
    }

    constexpr bool test(fault f) const noexcept {
        return bits_ & bit(f);
    }
    constexpr void set(fault f, bool on = true) noexcept {
        bits_ = on ? static_cast<std::uint8_t>(bits_ | bit(f))
                   : static_cast<std::uint8_t>(bits_ & ~bit(f));
    }
    constexpr bool any() const noexcept { return bits_ != 0; }
    constexpr bool none() const noexcept { return bits_ == 0; }
    constexpr void clear() noexcept { bits_ = 0; }
    constexpr std::uint8_t bits() const noexcept { return bits_; }

    constexpr fault_set& operator|=(fault_set o) noexcept {
        bits_ |= o.bits_;
        return *this;
    }
    constexpr bool operator==(const fault_set&) const = default;

    static constexpr fault_set from_bits(std::uint8_t b) noexcept {
        fault_set s;
        s.bits_ = static_cast<std::uint8_t>(b & 0x3F);
        return s;
    }

    std::vector<std::string> names() const;

private:
    static constexpr std::uint8_t bit(fault f) noexcept {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(f));
    }
    std::uint8_t bits_{0};
};

std::uint16_t pack_alarms(fault_set faults) noexcept;

/// Throws register_error(reserved_bits_set) for words with bits 6..15 set.
fault_set unpack_alarms(std::uint16_t word);

enum class run_status : std::uint16_t { running = 0, shutdown = 1 };

std::string_view to_string(run_status s) noexcept;

} // namespace dehum::registers
