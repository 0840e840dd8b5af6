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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <dehum/gateway/poller.hpp>
#include <dehum/link/virtual_link.hpp>
#include <dehum/net/socket.hpp>

namespace dehum {

/// Raised for unreadable or malformed configuration. `line` is 0 when the
/// problem is not tied to a particular line.
class config_error : public std::runtime_error {
public:
    config_error(const std::string& source, int line, const std::string& detail);
    int line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    int line_;
    std::string detail_;
};

inline constexpr std::uint16_t default_modbus_port{502};
inline constexpr std::uint16_t default_bridge_port{8080};
inline constexpr std::uint16_t default_tunnel_port{1503};
inline constexpr const char* config_env_var{"DEHUM_CONFIG"};

struct bench_config {
    net::endpoint modbus_listen{"127.0.0.1", default_modbus_port};
    gateway::poll_config poll;
    link::link_config link;
    net::endpoint tunnel{"127.0.0.1", default_tunnel_port};  // sim <-> gateway split
    net::endpoint bridge_listen{"127.0.0.1", default_bridge_port};
    std::int64_t session_ttl_ms{8LL * 3600 * 1000};
    std::optional<std::filesystem::path> web_root;
    std::optional<std::filesystem::path> presets;
    double speed{1.0};
    std::vector<std::pair<std::string, std::string>> users;  // user, encoded hash
    std::string client_user;
    std::string client_password;
    std::optional<std::filesystem::path> source;
};

/// Parses the INI/TOML-style text. Relative paths resolve against `base_dir`.
bench_config parse_config(std::string_view text, const std::string& source_name,
        const std::filesystem::path& base_dir);

bench_config load_config(const std::filesystem::path& path);

/// Explicit path, else $DEHUM_CONFIG, else nullopt.
std::optional<std::filesystem::path> resolve_config_path(
        const std::optional<std::filesystem::path>& explicit_path);

} // namespace dehum
