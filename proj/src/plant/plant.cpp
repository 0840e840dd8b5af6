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

#include <dehum/plant/plant.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace dehum::plant {

namespace {

constexpr std::array<std::string_view, sensor_count> labels{
        "SRT", "PA", "ST1", "SU1", "ST2", "SU2", "PRE", "POS", "PST1"};

bool is_humidity(sensor s) noexcept {
    return s == sensor::su1 || s == sensor::su2;
}

double clamp_rh(double v) noexcept {
    return std::clamp(v, 0.0, 100.0);
}

double relax(double current, double target, double alpha) noexcept {
    return current + (target - current) * alpha;
}

} // namespace

const char* to_string(plant_errc errc) noexcept {
    switch (errc) {
    case plant_errc::keys_still_active: return "KeysStillActive";
    case plant_errc::unknown_preset: return "UnknownPreset";
    case plant_errc::unknown_target: return "UnknownTarget";
    case plant_errc::value_out_of_range: return "ValueOutOfRange";
    case plant_errc::invalid_preset_file: return "InvalidPresetFile";
    }
    return "Unknown";
}

plant_error::plant_error(plant_errc errc, const std::string& detail)
    : std::runtime_error(std::string(to_string(errc)) + ": " + detail),
      errc_(errc) {}

std::string_view sensor_label(sensor s) noexcept {
    return labels[static_cast<std::size_t>(s)];
}

std::optional<sensor> parse_potentiometer(std::string_view label) noexcept {
    std::string upper;
    for (char c : label)
        upper.push_back(static_cast<char>(
                std::toupper(static_cast<unsigned char>(c))));
    for (std::size_t i = 0; i < sensor_count; ++i) {
        const auto s = static_cast<sensor>(i);
        if (labels[i] == upper && has_potentiometer(s))
            return s;
    }
    return std::nullopt;
}

std::pair<double, double> target_range(sensor s) {
    const auto& entry = registers::register_map::instance().lookup(
            static_cast<std::uint32_t>(sensor_address(s)));
    auto range = registers::encodable_range(entry);
    if (is_humidity(s))
        range = {0.0, 100.0};
    return range;
}

bench_inputs bench_inputs::defaults() {
    bench_inputs in;
    // Bench defaults: 40 degC everywhere, 40 %RH, 250 Pa across
    // the filter.
    in.targets.fill(40.0);
    in.set_target(sensor::pst1, 250.0);
    in.dry_efficiency = 0.5;
    return in;
}

plant_state plant_state::settled(const bench_inputs& inputs) {
    plant_state s;
    for (std::size_t i = 0; i < sensor_count; ++i)
        s.sensors[i] = inputs.targets[i];
    s.value(sensor::st2) = inputs.target(sensor::st1);
    s.value(sensor::su1) = clamp_rh(inputs.target(sensor::su1));
    s.value(sensor::su2) =
            clamp_rh(s.value(sensor::su1) * (1.0 - inputs.dry_efficiency));
    return s;
}

bool evaluate_airflow_fault(const plant_state& state,
        const bench_inputs& inputs) noexcept {
    return state.status == run_status::running
            && inputs.keys.test(fault::diff_pressure);
}

plant_state latch_faults(const plant_state& state, const bench_inputs& inputs) {
    plant_state next = state;
    for (auto f : registers::all_faults) {
        if (!inputs.keys.test(f))
            continue;
        if (f == fault::diff_pressure) {
            if (evaluate_airflow_fault(state, inputs))
                next.faults.set(f);
        } else {
            next.faults.set(f);
        }
    }
    next.status = next.faults.any() ? run_status::shutdown : run_status::running;
    return next;
}

plant_state step(const plant_state& state, const bench_inputs& inputs,
        double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("step: dt must be positive");

    plant_state next = latch_faults(state, inputs);
    next.sim_clock += dt;

    const double alpha = -std::expm1(-dt / relaxation_tau_s);
    for (std::size_t i = 0; i < sensor_count; ++i) {
        const auto s = static_cast<sensor>(i);
        if (has_potentiometer(s))
            next.sensors[i] = relax(state.sensors[i], inputs.targets[i], alpha);
    }
    next.value(sensor::su1) = clamp_rh(next.value(sensor::su1));
    next.value(sensor::st2) = relax(
            state.value(sensor::st2), state.value(sensor::st1), alpha);

    const double eta = next.status == run_status::running
            ? std::clamp(inputs.dry_efficiency, 0.0, 1.0)
            : 0.0;
    next.value(sensor::su2) = clamp_rh(relax(state.value(sensor::su2),
            next.value(sensor::su1) * (1.0 - eta), alpha));
    return next;
}

plant_state clear_faults(const plant_state& state, const bench_inputs& inputs) {
    if (inputs.keys.any())
        throw plant_error(plant_errc::keys_still_active,
                "release all bench keys first");
    plant_state next = state;
    next.faults.clear();
    next.status = run_status::running;
    return next;
}

std::uint16_t register_value(const plant_state& state, std::uint16_t address) {
    using namespace registers;
    const auto& entry = register_map::instance().lookup(
            static_cast<std::uint32_t>(address));
    switch (address) {
    case base_address:
        return state.a0;
    case alarms_address:
        return pack_alarms(state.faults);
    case status_address:
        return static_cast<std::uint16_t>(state.status);
    default:
        break;
    }
    const auto s = static_cast<sensor>(address - base_address - 1);
    const auto [lo, hi] = encodable_range(entry);
    const double v = std::clamp(state.value(s), lo, hi);
    return to_register({v, entry.unit}, entry);
}

std::array<std::uint16_t, registers::register_count> register_view(
        const plant_state& state) {
    std::array<std::uint16_t, registers::register_count> regs{};
    for (std::size_t i = 0; i < regs.size(); ++i)
        regs[i] = register_value(state,
                static_cast<std::uint16_t>(registers::base_address + i));
    return regs;
}

} // namespace dehum::plant
