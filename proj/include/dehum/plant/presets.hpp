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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <dehum/plant/plant.hpp>

namespace dehum::plant {

struct scenario_preset {
    std::string name;
    std::string comment;
    bench_inputs inputs;
    fault_set initial_faults;
    bool operator==(const scenario_preset&) const = default;
};

/// fig4a (ideal), fig4b (five keys pressed) and fig4c (live measures).
std::vector<scenario_preset> builtin_presets();

/// JSON array of preset objects. Throws plant_error(invalid_preset_file) on
/// schema errors, duplicate names or out-of-range targets.
std::vector<scenario_preset> parse_presets(std::string_view json_text);
std::vector<scenario_preset> load_presets(const std::filesystem::path& path);
std::string presets_to_json(std::span<const scenario_preset> presets);

const scenario_preset& find_preset(std::span<const scenario_preset> presets,
        std::string_view name);

/// Replaces the latched fault set with the preset's initial faults. Sensor
/// values are left to relax toward the new targets.
plant_state apply_preset(const plant_state& state, const scenario_preset& preset);

} // namespace dehum::plant
