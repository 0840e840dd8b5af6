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

#include <dehum/registers/register_map.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace dehum::registers {

namespace {

bool iequals(std::string_view a, std::string_view b) noexcept {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(a[i]))
                != std::toupper(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

int decimals(int scale) noexcept {
    int d = 0;
    for (int s = scale; s >= 10; s /= 10)
        ++d;
    return d;
}

} // namespace

const char* to_string(register_errc errc) noexcept {
    switch (errc) {
    case register_errc::not_found: return "NotFound";
    case register_errc::range_overflow: return "RangeOverflow";
    case register_errc::unit_mismatch: return "UnitMismatch";
    case register_errc::reserved_bits_set: return "ReservedBitsSet";
    }
    return "Unknown";
}

register_error::register_error(register_errc errc, const std::string& detail)
    : std::runtime_error(std::string(to_string(errc)) + ": " + detail),
      errc_(errc) {}

std::string_view unit_symbol(eng_unit u) noexcept {
    switch (u) {
    case eng_unit::celsius: return "°C";
    case eng_unit::percent_rh: return "%RH";
    case eng_unit::pascal: return "Pa";
    case eng_unit::dimensionless: return "";
    }
    return "";
}

std::string_view unit_name(eng_unit u) noexcept {
    switch (u) {
    case eng_unit::celsius: return "°C";
    case eng_unit::percent_rh: return "%RH";
    case eng_unit::pascal: return "Pa";
    case eng_unit::dimensionless: return "dimensionless";
    }
    return "dimensionless";
}

register_map::register_map() {
    using enum eng_unit;
    // Temperatures and humidities: signed x100. Pressure: unsigned Pa.
    entries_ = {
        {"MB_4000", "A0", "Test register", 4000, dimensionless, 1, false, true},
        {"MB_4001", "SRT", "Reactive outlet temperature", 4001, celsius, 100, true, false},
        {"MB_4002", "PA", "Reactive post-heating temperature", 4002, celsius, 100, true, false},
        {"MB_4003", "ST1", "Process input temperature", 4003, celsius, 100, true, false},
        {"MB_4004", "SU1", "Moisture Intake Process", 4004, percent_rh, 100, true, false},
        {"MB_4005", "ST2", "Process output temperature", 4005, celsius, 100, true, false},
        {"MB_4006", "SU2", "Process output humidity", 4006, percent_rh, 100, true, false},
        {"MB_4007", "PRE", "Pre-cooling temperature", 4007, celsius, 100, true, false},
        {"MB_4008", "POS", "Post-cooling temperature", 4008, celsius, 100, true, false},
        {"MB_4009", "PST1", "Pressure Sensor", 4009, pascal, 1, false, false},
        {"MB_4010", "ALARMS", "Active fault bitfield", 4010, dimensionless, 1, false, false},
        {"MB_4011", "STATUS", "Run status (0 running, 1 shutdown)", 4011, dimensionless, 1, false, false},
    };
}

const register_map& register_map::instance() {
    static const register_map map;
    return map;
}

const register_entry* register_map::find(std::string_view key) const noexcept {
    for (const auto& e : entries_)
        if (iequals(e.code, key) || iequals(e.plc_label, key))
            return &e;
    return nullptr;
}

const register_entry* register_map::find(std::uint32_t address) const noexcept {
    if (!in_map(address))
        return nullptr;
    return &entries_[address - base_address];
}

const register_entry& register_map::lookup(std::string_view key) const {
    if (auto* e = find(key))
        return *e;
    throw register_error(register_errc::not_found, std::string(key));
}

const register_entry& register_map::lookup(std::uint32_t address) const {
    if (auto* e = find(address))
        return *e;
    throw register_error(register_errc::not_found,
            "address " + std::to_string(address));
}

std::pair<double, double> encodable_range(const register_entry& entry) {
    const double lo = entry.is_signed ? -32768.0 : 0.0;
    const double hi = entry.is_signed ? 32767.0 : 65535.0;
    return {lo / entry.scale, hi / entry.scale};
}

std::uint16_t to_register(engineering_value value, const register_entry& entry) {
    if (value.unit != entry.unit)
        throw register_error(register_errc::unit_mismatch,
                std::string(entry.plc_label) + " expects "
                        + std::string(unit_name(entry.unit)));
    const double scaled = std::round(value.magnitude * entry.scale);
    const double lo = entry.is_signed ? -32768.0 : 0.0;
    const double hi = entry.is_signed ? 32767.0 : 65535.0;
    if (!(scaled >= lo && scaled <= hi))
        throw register_error(register_errc::range_overflow,
                std::to_string(value.magnitude) + " does not fit "
                        + std::string(entry.plc_label));
    const auto as_int = static_cast<std::int32_t>(scaled);
    return static_cast<std::uint16_t>(as_int & 0xFFFF);
}

engineering_value from_register(std::uint16_t raw, const register_entry& entry) {
    const double count = entry.is_signed
            ? static_cast<double>(static_cast<std::int16_t>(raw))
            : static_cast<double>(raw);
    return {count / entry.scale, entry.unit};
}

std::string format_value(std::uint16_t raw, const register_entry& entry) {
    const auto v = from_register(raw, entry);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals(entry.scale), v.magnitude);
    return buf;
}

std::string registers_json() {
    auto doc = nlohmann::json::array();
    for (const auto& e : register_map::instance().entries()) {
        doc.push_back({
            {"code", e.code},
            {"plc_label", e.plc_label},
            {"description", e.description},
            {"protocol_address", e.address},
            {"unit", unit_name(e.unit)},
            {"scale", e.scale},
            {"signed", e.is_signed},
            {"writable", e.writable},
        });
    }
    return doc.dump(2);
}

} // namespace dehum::registers
