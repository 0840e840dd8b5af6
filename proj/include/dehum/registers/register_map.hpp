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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dehum::registers {

enum class register_errc {
    not_found,
    range_overflow,
    unit_mismatch,
    reserved_bits_set,
};

const char* to_string(register_errc errc) noexcept;

class register_error : public std::runtime_error {
public:
    register_error(register_errc errc, const std::string& detail);
    register_errc code() const noexcept { return errc_; }

private:
    register_errc errc_;
};

enum class eng_unit { celsius, percent_rh, pascal, dimensionless };

/// "°C", "%RH", "Pa" or "" for dimensionless values.
std::string_view unit_symbol(eng_unit u) noexcept;
/// Name used in registers.json.
std::string_view unit_name(eng_unit u) noexcept;

struct register_entry {
    std::string_view code;
    std::string_view plc_label;
    std::string_view description;
    std::uint16_t address;  // 0-based protocol address
    eng_unit unit;
    int scale;              // engineering value * scale = register value
    bool is_signed;
    bool writable;
};

constexpr std::uint16_t base_address{4000};
constexpr std::uint16_t alarms_address{4010};
constexpr std::uint16_t status_address{4011};
constexpr std::size_t register_count{12};
constexpr std::uint16_t last_address{base_address + register_count - 1};

constexpr bool in_map(std::uint32_t address) noexcept {
    return address >= base_address && address <= last_address;
}

/// The dehumidifier PLC's holding-register block: the ten sensor rows
/// MB_4000..MB_4009 plus the ALARMS and STATUS extension words. Immutable.
class register_map {
public:
    static const register_map& instance();

    std::span<const register_entry> entries() const noexcept {
        return entries_;
    }

    /// Accepts a code ("MB_4003") or a PLC label ("ST1"), case-insensitive.
    const register_entry& lookup(std::string_view key) const;
    const register_entry& lookup(std::uint32_t address) const;

    const register_entry* find(std::string_view key) const noexcept;
    const register_entry* find(std::uint32_t address) const noexcept;

private:
    register_map();
    std::vector<register_entry> entries_;
};

struct engineering_value {
    double magnitude{};
    eng_unit unit{eng_unit::dimensionless};
};

std::uint16_t to_register(engineering_value value, const register_entry& entry);
engineering_value from_register(std::uint16_t raw, const register_entry& entry);

/// Engineering value formatted at register resolution, e.g. "54.50".
std::string format_value(std::uint16_t raw, const register_entry& entry);

/// Inclusive engineering range representable by the entry's register.
std::pair<double, double> encodable_range(const register_entry& entry);

/// registers.json: array of entries carrying every register_entry field.
std::string registers_json();

} // namespace dehum::registers
