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

#include <dehum/gateway/bridge.hpp>

#include <sys/socket.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include <dehum/gateway/monitor.hpp>
#include <dehum/net/http.hpp>
#include <dehum/net/websocket.hpp>
#include <dehum/registers/register_map.hpp>

namespace dehum::gateway {

using nlohmann::json;
using namespace std::chrono_literals;

namespace {

std::string json_response(int status, const json& body) {
    return net::http_response(status, "application/json", body.dump() + "\n");
}

std::string error_response(int status, std::string_view error) {
    return json_response(status, {{"error", error}});
}

int status_for(auth_errc errc) {
    return errc == auth_errc::store_unavailable ? 503 : 401;
}

std::string_view content_type(const std::filesystem::path& p) {
    const auto ext = p.extension().string();
    if (ext == ".html") return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs") return "text/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    return "application/octet-stream";
}

std::optional<std::string> bearer_token(const net::http_request& req) {
    if (auto h = req.header("Authorization")) {
        constexpr std::string_view prefix{"Bearer "};
        if (h->substr(0, prefix.size()) == prefix)
            return std::string(h->substr(prefix.size()));
    }
    if (auto it = req.query.find("session"); it != req.query.end())
        return it->second;
    return std::nullopt;
}

} // namespace

/// One attached operator: message framing plus a write lock shared by the
/// snapshot pusher and the command reader.
class monitor_bridge::stream {
public:
    stream(int fd, std::string& buffer, bool websocket)
        : fd_(fd), buffer_(buffer), websocket_(websocket) {}

    bool send(const json& msg) {
        std::lock_guard lock(write_mutex_);
        if (closed_)
            return false;
        try {
            if (websocket_)
                net::write_all(fd_, net::encode_ws_frame({net::ws_opcode::text, true,
                        msg.dump()}));
            else
                net::write_all(fd_, msg.dump() + "\n");
            return true;
        } catch (const net::net_error&) {
            closed_ = true;
            return false;
        }
    }

    /// Next client message, or nullopt when the peer is gone.
    std::optional<std::string> receive() {
        if (!websocket_) {
            std::string line;
            while (net::read_line(fd_, line, buffer_)) {
                if (!line.empty())
                    return line;
            }
            return std::nullopt;
        }
        while (auto frame = net::read_ws_frame(fd_, buffer_)) {
            switch (frame->opcode) {
            case net::ws_opcode::text:
                return std::move(frame->payload);
            case net::ws_opcode::ping: {
                std::lock_guard lock(write_mutex_);
                try {
                    net::write_all(fd_, net::encode_ws_frame(
                            {net::ws_opcode::pong, true, frame->payload}));
                } catch (const net::net_error&) {
                    return std::nullopt;
                }
                break;
            }
            case net::ws_opcode::close:
                return std::nullopt;
            default:
                break;
            }
        }
        return std::nullopt;
    }

    void close() {
        std::lock_guard lock(write_mutex_);
        if (closed_)
            return;
        if (websocket_) {
            try {
                net::write_all(fd_, net::encode_ws_frame({net::ws_opcode::close, true, ""}));
            } catch (const net::net_error&) {
            }
        }
        closed_ = true;
        ::shutdown(fd_, SHUT_RDWR);
    }

    bool closed() {
        std::lock_guard lock(write_mutex_);
        return closed_;
    }

private:
    int fd_;
    std::string& buffer_;
    bool websocket_;
    std::mutex write_mutex_;
    bool closed_{false};
};

monitor_bridge::monitor_bridge(bridge_options options, session_manager& sessions,
        bridge_sources sources)
    : options_(std::move(options)),
      sessions_(sessions),
      sources_(std::move(sources)),
      listener_(net::listen_tcp(options_.listen)),
      port_(net::local_port(listener_)) {}

monitor_bridge::~monitor_bridge() {
    stop();
}

void monitor_bridge::start() {
    if (running_.exchange(true))
        return;
    acceptor_ = std::thread([this] {
        while (running_) {
            auto conn = net::accept_for(listener_, 100);
            if (!conn)
                continue;
            std::lock_guard lock(conns_mutex_);
            for (auto it = conns_.begin(); it != conns_.end();) {
                if (!it->socket.valid() && it->worker.joinable()) {
                    it->worker.join();
                    it = conns_.erase(it);
                } else {
                    ++it;
                }
            }
            auto& c = conns_.emplace_back();
            c.socket = std::move(*conn);
            c.worker = std::thread([this, &c] { serve(c.socket); });
        }
    });
}

void monitor_bridge::stop() {
    if (!running_.exchange(false))
        return;
    if (acceptor_.joinable())
        acceptor_.join();
    sources_.mirror.notify_all();
    std::list<connection> conns;
    {
        std::lock_guard lock(conns_mutex_);
        for (auto& c : conns_)
            c.socket.shutdown();
        conns.splice(conns.end(), conns_);
    }
    for (auto& c : conns)
        if (c.worker.joinable())
            c.worker.join();
}

std::string monitor_bridge::handle_login(const std::string& body) {
    json req;
    try {
        req = json::parse(body);
    } catch (const json::parse_error&) {
        return error_response(400, "BadRequest");
    }
    if (!req.is_object() || !req.contains("user") || !req["user"].is_string()
            || !req.contains("password") || !req["password"].is_string())
        return error_response(400, "BadRequest");
    try {
        auto s = sessions_.login(req["user"].get<std::string>(),
                req["password"].get<std::string>());
        return json_response(200, {
            {"session_id", s.session_id},
            {"user", s.user},
            {"expires_in_ms", s.expires_at_ms - s.created_at_ms},
        });
    } catch (const auth_error& e) {
        return error_response(status_for(e.code()), to_string(e.code()));
    }
}

std::optional<std::string> monitor_bridge::static_file(const std::string& path) const {
    if (!options_.web_root || path.find("..") != std::string::npos)
        return std::nullopt;
    auto rel = path == "/" ? std::string("index.html") : path.substr(1);
    auto full = *options_.web_root / rel;
    std::ifstream in(full, std::ios::binary);
    if (!in || std::filesystem::is_directory(full))
        return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    return net::http_response(200, content_type(full), buf.str());
}

void monitor_bridge::serve(net::socket_fd& conn) {
    const int fd = conn.get();
    std::string buffer;
    while (running_) {
        if (buffer.empty() && !net::wait_readable(fd, 100))
            continue;
        auto req = net::read_http_request(fd, buffer);
        if (!req)
            break;

        std::string reply;
        try {
            if (req->path == "/api/login") {
                reply = req->method == "POST" ? handle_login(req->body)
                                              : error_response(405, "MethodNotAllowed");
            } else if (req->path == "/api/registers") {
                reply = net::http_response(200, "application/json",
                        registers::registers_json());
            } else if (req->path == "/api/stream") {
                auto token = bearer_token(*req);
                if (!token) {
                    reply = error_response(401, "AuthRequired");
                } else {
                    try {
                        const auto s = sessions_.validate(*token);
                        const bool ws = req->header_has_token("Upgrade", "websocket");
                        const bool nd = req->header_has_token("Upgrade", "ndjson");
                        auto key = req->header("Sec-WebSocket-Key");
                        if (ws && key) {
                            net::write_all(fd, "HTTP/1.1 101 Switching Protocols\r\n"
                                               "Upgrade: websocket\r\n"
                                               "Connection: Upgrade\r\n"
                                               "Sec-WebSocket-Accept: "
                                            + net::websocket_accept_key(*key)
                                            + "\r\n\r\n");
                            run_stream(fd, buffer, s, true);
                            break;
                        }
                        if (nd) {
                            net::write_all(fd, std::string_view(
                                    "HTTP/1.1 101 Switching Protocols\r\n"
                                    "Upgrade: ndjson\r\n"
                                    "Connection: Upgrade\r\n\r\n"));
                            run_stream(fd, buffer, s, false);
                            break;
                        }
                        reply = net::http_response(426, "application/json",
                                R"({"error":"UpgradeRequired"})" "\n",
                                "Upgrade: websocket, ndjson\r\n");
                    } catch (const auth_error& e) {
                        reply = error_response(status_for(e.code()), to_string(e.code()));
                    }
                }
            } else if (req->method == "GET") {
                auto file = static_file(req->path);
                reply = file ? *file : error_response(404, "NotFound");
            } else {
                reply = error_response(404, "NotFound");
            }
            net::write_all(fd, reply);
        } catch (const net::net_error&) {
            break;
        }
    }
    std::lock_guard lock(conns_mutex_);
    conn.close();
}

void monitor_bridge::run_stream(int fd, std::string& buffer, const session& s,
        bool websocket) {
    stream out(fd, buffer, websocket);

    auto expired = [&] {
        try {
            sessions_.validate(s.session_id);
            return false;
        } catch (const auth_error& e) {
            out.send({{"type", "error"}, {"error", to_string(e.code())}});
            out.close();
            return true;
        }
    };

    std::thread reader([&] {
        for (;;) {
            std::optional<std::string> text;
            try {
                text = out.receive();
            } catch (const net::net_error&) {
            }
            if (!text)
                break;
            if (expired())
                return;
            json msg;
            std::string type = "unknown";
            try {
                msg = json::parse(*text);
                if (msg.is_object() && msg.contains("type") && msg["type"].is_string())
                    type = msg["type"].get<std::string>();
                auto command = parse_bridge_command(msg);
                if (!sources_.console)
                    throw bridge_error(bridge_errc::bench_unavailable,
                            "plant is not hosted by this gateway");
                auto ack = sources_.console(std::move(command));
                if (ack.wait_for(5s) != std::future_status::ready)
                    throw std::runtime_error("plant did not answer");
                const auto applied = ack.get();
                out.send({{"type", "ack"}, {"command", type},
                        {"applied_ms", applied.applied_ms}});
            } catch (const json::parse_error&) {
                out.send({{"type", "error"}, {"command", type},
                        {"error", "BadCommand"}, {"detail", "invalid JSON"}});
            } catch (const std::exception& e) {
                out.send({{"type", "error"}, {"command", type},
                        {"error", command_error_name(e)}, {"detail", e.what()}});
            }
        }
        out.close();
    });

    const auto heartbeat = std::chrono::milliseconds(options_.heartbeat_ms);
    auto seen = sources_.mirror.version();
    auto push = [&](bool is_heartbeat) {
        auto snap = sources_.mirror.load();
        return out.send(snapshot_message(snap.get(), sources_.clock(),
                sources_.link_stats_fn ? sources_.link_stats_fn() : link::link_stats{},
                sources_.poll_stats_fn ? sources_.poll_stats_fn() : poll_stats{},
                is_heartbeat));
    };

    out.send({{"type", "hello"}, {"user", s.user},
            {"expires_in_ms", s.expires_at_ms - sessions_.now_ms()}});
    push(false);
    auto last_sent = std::chrono::steady_clock::now();
    while (running_ && !out.closed()) {
        if (expired())
            break;
        const auto since = std::chrono::steady_clock::now() - last_sent;
        const auto left = heartbeat - std::chrono::duration_cast<std::chrono::milliseconds>(since);
        const auto wait = std::clamp(left, 0ms, 200ms);
        const auto now_version = sources_.mirror.wait_for_change(seen, wait);
        bool sent = false;
        if (now_version != seen) {
            seen = now_version;
            sent = push(false);
        } else if (std::chrono::steady_clock::now() - last_sent >= heartbeat) {
            sent = push(true);
        } else {
            continue;
        }
        if (!sent)
            break;
        last_sent = std::chrono::steady_clock::now();
    }
    out.close();
    reader.join();
}

} // namespace dehum::gateway
