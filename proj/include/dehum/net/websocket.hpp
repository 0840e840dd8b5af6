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
#include <optional>
#include <string>
#include <string_view>

namespace dehum::net {

/// Sec-WebSocket-Accept value for a client key.
std::string websocket_accept_key(std::string_view client_key);

enum class ws_opcode : std::uint8_t {
    continuation = 0x0,
    text = 0x1,
    binary = 0x2,
    close = 0x8,
    ping = 0x9,
    pong = 0xA,
};

struct ws_frame {
    ws_opcode opcode{ws_opcode::text};
    bool fin{true};
    std::string payload;
};

/// Server frames are unmasked; client frames must be masked.
std::string encode_ws_frame(const ws_frame& frame, bool masked = false,
        std::uint32_t mask_key = 0x12345678);

/// Reads one frame, unmasking client payloads. nullopt on EOF, a frame over
/// `max_payload`, or a malformed header.
std::optional<ws_frame> read_ws_frame(int fd, std::string& buffer,
        std::size_t max_payload = 1 << 16);

} // namespace dehum::net
