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

#include <dehum/plant/presets.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dehum::plant {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) {
    throw plant_error(plant_errc::invalid_preset_file, what);
}

fault_set parse_fault_list(const json& list, const std::string& where) {
    fault_set faults;
    if (!list.is_array())
        invalid(where + ": expected an array of fault names");
    for (const auto& item : list) {
        if (!item.is_string())
            invalid(where + ": fault names must be strings");
        auto f = registers::parse_fault(item.get<std::string>());
        if (!f)
            invalid(where + ": unknown fault '" + item.get<std::string>() + "'");
        faults.set(*f);
    }
    return faults;
}

json fault_list(fault_set faults) {
    return faults.names();
}

} // namespace

std::vector<scenario_preset> builtin_presets() {
    const auto defaults = bench_inputs::defaults();
    const std::string unlisted =
            "Targets not listed here use the bench defaults "
            "(40.00 degC, 40.00 %RH, 250 Pa, eta 0.5).";

    scenario_preset ideal{"fig4a", "Ideal condition: no keys, no faults. " + unlisted,
            defaults, {}};

    const fault_set prose_faults{fault::emergency, fault::safety_thermostat,
            fault::motor_overload, fault::react_sensor, fault::post_heater};
    scenario_preset fails{"fig4b",
            "Conditions with fails: emergency, safety thermostat, motor "
            "overload, reactivation sensor and post-heater keys pressed. "
                    + unlisted,
            defaults, prose_faults};
    fails.inputs.keys = prose_faults;

    scenario_preset measures{"fig4c",
            "Measured parameters: process input 54.50 degC, intake "
            "humidity 51.90 %RH. " + unlisted,
            defaults, {}};
    measures.inputs.set_target(sensor::st1, 54.50);
    measures.inputs.set_target(sensor::su1, 51.90);

    return {ideal, fails, measures};
}

std::vector<scenario_preset> parse_presets(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        invalid(e.what());
    }
    if (!doc.is_array())
        invalid("top level must be an array of presets");

    std::vector<scenario_preset> presets;
    std::set<std::string> names;
    for (const auto& obj : doc) {
        if (!obj.is_object() || !obj.contains("name") || !obj["name"].is_string())
            invalid("each preset needs a string 'name'");
        scenario_preset p;
        p.name = obj["name"].get<std::string>();
        if (!names.insert(p.name).second)
            invalid("duplicate preset name '" + p.name + "'");
        p.comment = obj.value("comment", "");
        p.inputs = bench_inputs::defaults();

        if (obj.contains("keys"))
            p.inputs.keys = parse_fault_list(obj["keys"], p.name + ".keys");
        if (obj.contains("initial_faults"))
            p.initial_faults = parse_fault_list(
                    obj["initial_faults"], p.name + ".initial_faults");
        if (obj.contains("dry_efficiency")) {
            const auto& eta = obj["dry_efficiency"];
            if (!eta.is_number() || eta.get<double>() < 0.0
                    || eta.get<double>() > 1.0)
                invalid(p.name + ".dry_efficiency must be a number in [0,1]");
            p.inputs.dry_efficiency = eta.get<double>();
        }
        if (obj.contains("targets")) {
            const auto& targets = obj["targets"];
            if (!targets.is_object())
                invalid(p.name + ".targets must be an object");
            for (const auto& [label, value] : targets.items()) {
                auto s = parse_potentiometer(label);
                if (!s)
                    invalid(p.name + ".targets: no potentiometer '" + label + "'");
                if (!value.is_number())
                    invalid(p.name + ".targets." + label + " must be a number");
                const auto [lo, hi] = target_range(*s);
                const double v = value.get<double>();
                if (v < lo || v > hi)
                    invalid(p.name + ".targets." + label + " out of range");
                p.inputs.set_target(*s, v);
            }
        }
        presets.push_back(std::move(p));
    }
    return presets;
}

std::vector<scenario_preset> load_presets(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        invalid("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_presets(buf.str());
}

std::string presets_to_json(std::span<const scenario_preset> presets) {
    json doc = json::array();
    for (const auto& p : presets) {
        json targets = json::object();
        for (std::size_t i = 0; i < sensor_count; ++i) {
            const auto s = static_cast<sensor>(i);
            if (has_potentiometer(s))
                targets[std::string(sensor_label(s))] = p.inputs.targets[i];
        }
        doc.push_back({
            {"name", p.name},
            {"comment", p.comment},
            {"keys", fault_list(p.inputs.keys)},
            {"initial_faults", fault_list(p.initial_faults)},
            {"dry_efficiency", p.inputs.dry_efficiency},
            {"targets", targets},
        });
    }
    return doc.dump(2);
}

const scenario_preset& find_preset(std::span<const scenario_preset> presets,
        std::string_view name) {
    for (const auto& p : presets)
        if (p.name == name)
            return p;
    throw plant_error(plant_errc::unknown_preset, std::string(name));
}

plant_state apply_preset(const plant_state& state, const scenario_preset& preset) {
    plant_state next = state;
    next.faults = preset.initial_faults;
    next.status = next.faults.any() ? run_status::shutdown : run_status::running;
    return next;
}

} // namespace dehum::plant
