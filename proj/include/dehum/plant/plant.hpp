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
#include <stdexcept>
#include <string>
#include <string_view>

#include <dehum/registers/alarms.hpp>
#include <dehum/registers/register_map.hpp>

namespace dehum::plant {

using registers::fault;
using registers::fault_set;
using registers::run_status;

enum class plant_errc {
    keys_still_active,
    unknown_preset,
    unknown_target,
    value_out_of_range,
    invalid_preset_file,
};

const char* to_string(plant_errc errc) noexcept;

class plant_error : public std::runtime_error {
public:
    plant_error(plant_errc errc, const std::string& detail);
    plant_errc code() const noexcept { return errc_; }

private:
    plant_errc errc_;
};

/// The nine analog channels, in register order (MB_4001..MB_4009).
enum class sensor : std::uint8_t { srt, pa, st1, su1, st2, su2, pre, pos, pst1 };

constexpr std::size_t sensor_count{9};

constexpr std::uint16_t sensor_address(sensor s) noexcept {
    return static_cast<std::uint16_t>(4001 + static_cast<unsigned>(s));
}

/// Sensors driven directly by a bench potentiometer. ST2 and SU2 are
/// derived from ST1 and SU1.
constexpr bool has_potentiometer(sensor s) noexcept {
    return s != sensor::st2 && s != sensor::su2;
}

/// Looks a potentiometer up by PLC label ("ST1", case-insensitive).
std::optional<sensor> parse_potentiometer(std::string_view label) noexcept;
std::string_view sensor_label(sensor s) noexcept;

/// Legal engineering range for a potentiometer target: the register's
/// encodable range, narrowed to 0..100 for humidities.
std::pair<double, double> target_range(sensor s);

constexpr double relaxation_tau_s{5.0};
constexpr double tick_s{0.1};

struct bench_inputs {
    fault_set keys;                          // bench keys currently held
    std::array<double, sensor_count> targets; // potentiometer set points
    double dry_efficiency{0.5};

    static bench_inputs defaults();

    double target(sensor s) const noexcept {
        return targets[static_cast<std::size_t>(s)];
    }
    void set_target(sensor s, double v) noexcept {
        targets[static_cast<std::size_t>(s)] = v;
    }
    bool operator==(const bench_inputs&) const = default;
};

struct plant_state {
    std::array<double, sensor_count> sensors{};
    std::uint16_t a0{0};
    fault_set faults;
    run_status status{run_status::running};
    double sim_clock{0.0};

    double value(sensor s) const noexcept {
        return sensors[static_cast<std::size_t>(s)];
    }
    double& value(sensor s) noexcept {
        return sensors[static_cast<std::size_t>(s)];
    }
    bool operator==(const plant_state&) const = default;

    /// All sensors at rest on the given inputs' targets, running, no faults.
    static plant_state settled(const bench_inputs& inputs);
};

/// Advances the plant by `dt` seconds. Potentiometer channels relax
/// first-order toward their targets; ST2 follows ST1; SU2 follows
/// SU1 * (1 - eta) while running and SU1 while shut down. Any held key
/// latches its fault and forces shutdown in the same step. Throws
/// std::invalid_argument for dt <= 0.
/// Latches every held key (the airflow fault only while running) and
/// derives the run status. Applied at the start of each step and
/// immediately when a key is pressed.
plant_state latch_faults(const plant_state& state, const bench_inputs& inputs);

plant_state step(const plant_state& state, const bench_inputs& inputs,
        double dt);

/// The differential-pressure switch only trips on running equipment.
bool evaluate_airflow_fault(const plant_state& state,
        const bench_inputs& inputs) noexcept;

/// Operator reset. Throws plant_error(keys_still_active) while any key is
/// held.
plant_state clear_faults(const plant_state& state, const bench_inputs& inputs);

/// Register value for an address in 4000..4011, per the register map
/// encoding. Out-of-range analog values saturate.
std::uint16_t register_value(const plant_state& state, std::uint16_t address);

std::array<std::uint16_t, registers::register_count> register_view(
        const plant_state& state);

} // namespace dehum::plant
