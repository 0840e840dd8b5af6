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

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <dehum/clock.hpp>
#include <dehum/modbus/pdu.hpp>
#include <dehum/plant/plant.hpp>
#include <dehum/plant/presets.hpp>
#include <dehum/plant/slave.hpp>

namespace dehum::plant {

struct plant_snapshot {
    plant_state state;
    bench_inputs inputs;
    std::int64_t taken_ms{};
};

namespace cmd {
struct set_key {
    fault which;
    bool pressed;
};
struct set_pot {
    sensor which;
    double value;
};
struct set_efficiency {
    double value;
};
struct clear_faults {};
struct load_preset {
    std::string name;
};
} // namespace cmd

using bench_command = std::variant<cmd::set_key, cmd::set_pot,
        cmd::set_efficiency, cmd::clear_faults, cmd::load_preset>;

struct command_ack {
    std::int64_t applied_ms{};
};

/// Single owner of the plant state. Bench commands and RTU requests are
/// queued by any thread and applied between ticks; everyone else reads
/// immutable snapshots.
class plant_driver {
public:
    struct options {
        double tick_s = plant::tick_s;
        double speed = 1.0;  // simulated seconds per wall second
        std::uint8_t unit_id = 1;
        std::vector<scenario_preset> presets = builtin_presets();
        clock_fn clock = steady_ms;
    };

    plant_driver(options opts, plant_state initial, bench_inputs inputs);
    ~plant_driver();

    plant_driver(const plant_driver&) = delete;
    plant_driver& operator=(const plant_driver&) = delete;

    void start();
    void stop();

    /// Failures arrive as plant_error through the future.
    std::future<command_ack> submit(bench_command command);
    std::future<std::optional<modbus::bytes>> submit_rtu(modbus::bytes frame);

    std::shared_ptr<const plant_snapshot> snapshot() const;

    // Manual driving, for callers that own the schedule (tests, the
    // accelerated harness). Not to be mixed with start().
    void apply_pending();
    void tick();

    const std::vector<scenario_preset>& presets() const noexcept {
        return opts_.presets;
    }

private:
    struct pending_command {
        bench_command command;
        std::promise<command_ack> done;
    };
    struct pending_rtu {
        modbus::bytes frame;
        std::promise<std::optional<modbus::bytes>> done;
    };
    using pending = std::variant<pending_command, pending_rtu>;

    void run();
    void apply(pending_command& p);
    void apply(pending_rtu& p);
    void publish();

    options opts_;
    rtu_slave slave_;
    plant_state state_;
    bench_inputs inputs_;

    mutable std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::deque<pending> queue_;
    bool stopping_{false};

    mutable std::mutex snapshot_mutex_;
    std::shared_ptr<const plant_snapshot> snapshot_;

    std::thread worker_;
};

} // namespace dehum::plant
