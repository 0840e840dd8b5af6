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

#include <dehum/registers/alarms.hpp>

#include <cctype>

#include <dehum/registers/register_map.hpp>

namespace dehum::registers {

std::string_view fault_name(fault f) noexcept {
    switch (f) {
    case fault::emergency: return "EMERGENCY";
    case fault::safety_thermostat: return "SAFETY_THERMOSTAT";
    case fault::motor_overload: return "MOTOR_OVERLOAD";
    case fault::react_sensor: return "REACT_SENSOR";
    case fault::post_heater: return "POST_HEATER";
    case fault::diff_pressure: return "DIFF_PRESSURE";
    }
    return "";
}

std::optional<fault> parse_fault(std::string_view name) noexcept {
    std::string norm;
    for (char c : name)
        norm.push_back(c == '-' ? '_'
                                : static_cast<char>(std::toupper(
                                          static_cast<unsigned char>(c))));
    for (auto f : all_faults)
        if (fault_name(f) == norm)
            return f;
    return std::nullopt;
}

std::vector<std::string> fault_set::names() const {
    std::vector<std::string> out;
    for (auto f : all_faults)
        if (test(f))
            out.emplace_back(fault_name(f));
    return out;
}

std::uint16_t pack_alarms(fault_set faults) noexcept {
    std::uint16_t word = 0;
    for (auto f : all_faults)
        if (faults.test(f))
            word |= static_cast<std::uint16_t>(1u << static_cast<unsigned>(f));
    return word;
}

fault_set unpack_alarms(std::uint16_t word) {
    if (word & alarm_reserved_mask)
        throw register_error(register_errc::reserved_bits_set,
                "alarm word " + std::to_string(word));
    fault_set faults;
    for (auto f : all_faults)
        faults.set(f, word & (1u << static_cast<unsigned>(f)));
    return faults;
}

std::string_view to_string(run_status s) noexcept {
    return s == run_status::running ? "RUNNING" : "SHUTDOWN";
}

} // namespace dehum::registers
