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

#include <cstdint>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include <dehum/gateway/mirror.hpp>
#include <dehum/gateway/poller.hpp>
#include <dehum/link/virtual_link.hpp>
#include <dehum/plant/driver.hpp>

namespace dehum::gateway {

enum class bridge_errc { bad_command, unknown_fault, unknown_target, bench_unavailable };

const char* to_string(bridge_errc errc) noexcept;

class bridge_error : public std::runtime_error {
public:
    bridge_error(bridge_errc errc, const std::string& detail);
    bridge_errc code() const noexcept { return errc_; }

private:
    bridge_errc errc_;
};

nlohmann::json link_stats_json(const link::link_stats& stats);
nlohmann::json poll_stats_json(const poll_stats& stats);

/// Server-to-client {type:"snapshot"} message. `snap` may be null before
/// the first successful poll.
nlohmann::json snapshot_message(const mirror_snapshot* snap, std::int64_t now_ms,
        const link::link_stats& link, const poll_stats& poll, bool heartbeat);

/// Client-to-server console messages: key, pot, clear_faults, preset.
plant::bench_command parse_bridge_command(const nlohmann::json& msg);

/// Error name for any exception a console command can raise, e.g.
/// "KeysStillActive", "UnknownFault".
std::string command_error_name(const std::exception& e);

} // namespace dehum::gateway
