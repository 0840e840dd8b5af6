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

#include <dehum/cli/runtime.hpp>

#include <dehum/plant/presets.hpp>

namespace dehum::cli {

std::vector<plant::scenario_preset> configured_presets(const bench_config& cfg) {
    if (!cfg.presets)
        return plant::builtin_presets();
    try {
        return plant::load_presets(*cfg.presets);
    } catch (const plant::plant_error& e) {
        throw config_error(cfg.presets->string(), 0, e.what());
    }
}

gateway::credential_store configured_users(const bench_config& cfg) {
    gateway::credential_store store;
    for (const auto& [user, hash] : cfg.users) {
        try {
            store.add(user, hash);
        } catch (const std::invalid_argument& e) {
            throw config_error(cfg.source ? cfg.source->string() : "config", 0,
                    std::string("[users] ") + e.what());
        }
    }
    return store;
}

std::unique_ptr<plant::plant_driver> make_driver(const bench_config& cfg,
        const std::string& preset) {
    plant::plant_driver::options opts;
    opts.speed = cfg.speed;
    opts.unit_id = cfg.poll.unit_id;
    opts.presets = configured_presets(cfg);
    const auto& p = plant::find_preset(opts.presets, preset);
    auto initial = plant::apply_preset(plant::plant_state::settled(p.inputs), p);
    return std::make_unique<plant::plant_driver>(std::move(opts), initial, p.inputs);
}

gateway_stack::gateway_stack(const bench_config& cfg, link::rtu_transport& transport,
        gateway::console_fn console)
    : transport_(transport),
      poller_(cfg.poll, transport, mirror_, writes_),
      server_(cfg.modbus_listen, mirror_, writes_),
      sessions_(configured_users(cfg), cfg.session_ttl_ms),
      bridge_(gateway::bridge_options{cfg.bridge_listen, cfg.web_root}, sessions_,
              gateway::bridge_sources{mirror_,
                      [this] { return transport_.stats(); },
                      [this] { return poller_.stats(); },
                      std::move(console)}) {}

void gateway_stack::start() {
    poller_.start();
    server_.start();
    bridge_.start();
}

void gateway_stack::stop() {
    bridge_.stop();
    server_.stop();
    poller_.stop();
}

bench_runtime::bench_runtime(const bench_config& cfg, const std::string& preset)
    : driver_(make_driver(cfg, preset)),
      link_(cfg.link),
      slave_(link_, [this](std::span<const std::uint8_t> frame) {
          return driver_->submit_rtu(modbus::bytes(frame.begin(), frame.end())).get();
      }),
      master_(link_) {
    gateway_ = std::make_unique<gateway_stack>(cfg, master_,
            [this](plant::bench_command c) { return driver_->submit(std::move(c)); });
}

bench_runtime::~bench_runtime() {
    stop();
}

void bench_runtime::start() {
    driver_->start();
    slave_.start();
    gateway_->start();
}

void bench_runtime::stop() {
    gateway_->stop();
    slave_.stop();
    link_.close();
    driver_->stop();
}

} // namespace dehum::cli
