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

#include <chrono>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include <dehum/net/socket.hpp>

namespace dehum::cli {

/// POST /api/login. Returns the session id; rejections surface as
/// gateway::auth_error.
std::string bridge_login(const net::endpoint& bridge, const std::string& user,
        const std::string& password);

/// Client end of the NDJSON message stream.
class bridge_stream {
public:
    bridge_stream(const net::endpoint& bridge, const std::string& session_id);

    /// Next message, or nullopt on timeout. Throws net_error once the
    /// server closes the stream.
    std::optional<nlohmann::json> next(std::chrono::milliseconds timeout);
    void send(const nlohmann::json& message);

private:
    net::socket_fd socket_;
    std::string buffer_;
};

} // namespace dehum::cli
