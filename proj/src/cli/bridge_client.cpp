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

#include <dehum/cli/bridge_client.hpp>

#include <dehum/gateway/auth.hpp>
#include <dehum/net/http.hpp>

namespace dehum::cli {

using nlohmann::json;

namespace {

[[noreturn]] void raise_auth(const net::http_reply& reply) {
    std::string name;
    try {
        name = json::parse(reply.body).value("error", "");
    } catch (const json::exception&) {
    }
    using gateway::auth_errc;
    for (auto errc : {auth_errc::bad_credentials, auth_errc::store_unavailable,
                 auth_errc::auth_required, auth_errc::auth_expired})
        if (name == gateway::to_string(errc))
            throw gateway::auth_error(errc, "rejected by bridge");
    throw net::net_error(net::net_errc::io_error,
            "bridge answered HTTP " + std::to_string(reply.status));
}

} // namespace

std::string bridge_login(const net::endpoint& bridge, const std::string& user,
        const std::string& password) {
    auto sock = net::connect_tcp(bridge);
    const auto body = json{{"user", user}, {"password", password}}.dump();
    net::write_all(sock.get(), "POST /api/login HTTP/1.1\r\nHost: " + bridge.to_string()
            + "\r\nContent-Type: application/json\r\nContent-Length: "
            + std::to_string(body.size()) + "\r\nConnection: close\r\n\r\n" + body);
    std::string buffer;
    auto reply = net::read_http_reply(sock.get(), buffer);
    if (!reply)
        throw net::net_error(net::net_errc::io_error, "malformed login reply");
    if (reply->status != 200)
        raise_auth(*reply);
    return json::parse(reply->body).at("session_id").get<std::string>();
}

bridge_stream::bridge_stream(const net::endpoint& bridge, const std::string& session_id)
    : socket_(net::connect_tcp(bridge)) {
    net::write_all(socket_.get(), "GET /api/stream HTTP/1.1\r\nHost: " + bridge.to_string()
            + "\r\nAuthorization: Bearer " + session_id
            + "\r\nConnection: Upgrade\r\nUpgrade: ndjson\r\n\r\n");
    auto reply = net::read_http_reply(socket_.get(), buffer_);
    if (!reply)
        throw net::net_error(net::net_errc::io_error, "malformed stream reply");
    if (reply->status != 101)
        raise_auth(*reply);
}

std::optional<json> bridge_stream::next(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        if (buffer_.find('\n') == std::string::npos) {
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now());
            if (left.count() <= 0
                    || !net::wait_readable(socket_.get(), static_cast<int>(left.count())))
                return std::nullopt;
        }
        std::string line;
        if (!net::read_line(socket_.get(), line, buffer_))
            throw net::net_error(net::net_errc::io_error, "bridge closed the stream");
        if (!line.empty())
            return json::parse(line);
    }
}

void bridge_stream::send(const json& message) {
    net::write_all(socket_.get(), message.dump() + "\n");
}

} // namespace dehum::cli
