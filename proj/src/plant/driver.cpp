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

#include <dehum/plant/driver.hpp>

#include <chrono>

namespace dehum::plant {

plant_driver::plant_driver(options opts, plant_state initial, bench_inputs inputs)
    : opts_(std::move(opts)),
      slave_(opts_.unit_id),
      state_(initial),
      inputs_(inputs) {
    publish();
}

plant_driver::~plant_driver() {
    stop();
}

void plant_driver::start() {
    if (worker_.joinable())
        return;
    {
        std::lock_guard lock(queue_mutex_);
        stopping_ = false;
    }
    worker_ = std::thread([this] { run(); });
}

void plant_driver::stop() {
    {
        std::lock_guard lock(queue_mutex_);
        stopping_ = true;
    }
    queue_cv_.notify_all();
    if (worker_.joinable())
        worker_.join();
}

std::future<command_ack> plant_driver::submit(bench_command command) {
    pending_command p{std::move(command), {}};
    auto fut = p.done.get_future();
    {
        std::lock_guard lock(queue_mutex_);
        queue_.emplace_back(std::move(p));
    }
    queue_cv_.notify_one();
    return fut;
}

std::future<std::optional<modbus::bytes>> plant_driver::submit_rtu(
        modbus::bytes frame) {
    pending_rtu p{std::move(frame), {}};
    auto fut = p.done.get_future();
    {
        std::lock_guard lock(queue_mutex_);
        queue_.emplace_back(std::move(p));
    }
    queue_cv_.notify_one();
    return fut;
}

std::shared_ptr<const plant_snapshot> plant_driver::snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
}

void plant_driver::publish() {
    auto snap = std::make_shared<const plant_snapshot>(
            plant_snapshot{state_, inputs_, opts_.clock()});
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = std::move(snap);
}

void plant_driver::apply(pending_command& p) {
    try {
        std::visit(
                [this](auto& c) {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, cmd::set_key>) {
                        inputs_.keys.set(c.which, c.pressed);
                        state_ = latch_faults(state_, inputs_);
                    } else if constexpr (std::is_same_v<T, cmd::set_pot>) {
                        if (!has_potentiometer(c.which))
                            throw plant_error(plant_errc::unknown_target,
                                    std::string(sensor_label(c.which)));
                        const auto [lo, hi] = target_range(c.which);
                        if (!(c.value >= lo && c.value <= hi))
                            throw plant_error(plant_errc::value_out_of_range,
                                    std::string(sensor_label(c.which)) + " = "
                                            + std::to_string(c.value));
                        inputs_.set_target(c.which, c.value);
                    } else if constexpr (std::is_same_v<T, cmd::set_efficiency>) {
                        if (!(c.value >= 0.0 && c.value <= 1.0))
                            throw plant_error(plant_errc::value_out_of_range,
                                    "dry efficiency " + std::to_string(c.value));
                        inputs_.dry_efficiency = c.value;
                    } else if constexpr (std::is_same_v<T, cmd::clear_faults>) {
                        state_ = plant::clear_faults(state_, inputs_);
                    } else if constexpr (std::is_same_v<T, cmd::load_preset>) {
                        const auto& preset = find_preset(opts_.presets, c.name);
                        inputs_ = preset.inputs;
                        state_ = apply_preset(state_, preset);
                    }
                },
                p.command);
        publish();
        p.done.set_value(command_ack{opts_.clock()});
    } catch (...) {
        p.done.set_exception(std::current_exception());
    }
}

void plant_driver::apply(pending_rtu& p) {
    auto reply = slave_.handle(state_, p.frame);
    publish();
    p.done.set_value(std::move(reply));
}

void plant_driver::apply_pending() {
    std::deque<pending> batch;
    {
        std::lock_guard lock(queue_mutex_);
        batch.swap(queue_);
    }
    for (auto& item : batch)
        std::visit([this](auto& p) { apply(p); }, item);
}

void plant_driver::tick() {
    state_ = step(state_, inputs_, opts_.tick_s * opts_.speed);
    publish();
}

void plant_driver::run() {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(
            std::chrono::duration<double>(opts_.tick_s));
    auto next_tick = clock::now() + period;

    for (;;) {
        {
            std::unique_lock lock(queue_mutex_);
            queue_cv_.wait_until(lock, next_tick,
                    [this] { return stopping_ || !queue_.empty(); });
            if (stopping_)
                break;
        }
        apply_pending();
        const auto now = clock::now();
        if (now >= next_tick) {
            tick();
            next_tick += period;
            if (now - next_tick > 10 * period)
                next_tick = now + period;
        }
    }

    // Nobody will service what is left; fail it loudly.
    std::deque<pending> rest;
    {
        std::lock_guard lock(queue_mutex_);
        rest.swap(queue_);
    }
    for (auto& item : rest)
        std::visit(
                [](auto& p) {
                    p.done.set_exception(std::make_exception_ptr(
                            std::runtime_error("plant driver stopped")));
                },
                item);
}

} // namespace dehum::plant
