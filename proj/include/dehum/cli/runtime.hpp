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

#include <memory>
#include <string>
#include <vector>

#include <dehum/config.hpp>
#include <dehum/gateway/auth.hpp>
#include <dehum/gateway/bridge.hpp>
#include <dehum/gateway/mirror.hpp>
#include <dehum/gateway/modbus_server.hpp>
#include <dehum/gateway/poller.hpp>
#include <dehum/link/transport.hpp>
#include <dehum/plant/driver.hpp>

namespace dehum::cli {

/// Presets from the configured file, or the built-in set.
std::vector<plant::scenario_preset> configured_presets(const bench_config& cfg);

gateway::credential_store configured_users(const bench_config& cfg);

/// Plant driver started from a settled preset.
std::unique_ptr<plant::plant_driver> make_driver(const bench_config& cfg,
        const std::string& preset);

/// Poller, Modbus TCP server and monitoring bridge over any RTU transport.
class gateway_stack {
public:
    gateway_stack(const bench_config& cfg, link::rtu_transport& transport,
            gateway::console_fn console);

    void start();
    void stop();

    std::uint16_t modbus_port() const noexcept { return server_.port(); }
    std::uint16_t bridge_port() const noexcept { return bridge_.port(); }
    const gateway::register_mirror& mirror() const noexcept { return mirror_; }
    gateway::poll_stats poll_stats() const { return poller_.stats(); }
    link::link_stats link_stats() const { return transport_.stats(); }

private:
    link::rtu_transport& transport_;
    gateway::register_mirror mirror_;
    gateway::write_queue writes_;
    gateway::poller poller_;
    gateway::modbus_tcp_server server_;
    gateway::session_manager sessions_;
    gateway::monitor_bridge bridge_;
};

/// Everything in one process: plant, impaired link, gateway.
class bench_runtime {
public:
    bench_runtime(const bench_config& cfg, const std::string& preset);
    ~bench_runtime();

    void start();
    void stop();

    plant::plant_driver& driver() noexcept { return *driver_; }
    gateway_stack& gateway() noexcept { return *gateway_; }

private:
    std::unique_ptr<plant::plant_driver> driver_;
    link::virtual_link link_;
    link::slave_endpoint slave_;
    link::link_master_transport master_;
    std::unique_ptr<gateway_stack> gateway_;
};

} // namespace dehum::cli
