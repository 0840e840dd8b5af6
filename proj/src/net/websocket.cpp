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

#include <dehum/net/websocket.hpp>

#include <cerrno>
#include <sys/socket.h>

#include <openssl/evp.h>
#include <openssl/sha.h>

namespace dehum::net {

namespace {

constexpr std::string_view ws_guid{"258EAFA5-E914-47DA-95CA-C5AB0DC85B11"};

bool need(int fd, std::string& buffer, std::size_t n) {
    char chunk[4096];
    while (buffer.size() < n) {
        ssize_t got = ::recv(fd, chunk, sizeof chunk, 0);
        if (got < 0 && errno == EINTR)
            continue;
        if (got <= 0)
            return false;
        buffer.append(chunk, static_cast<std::size_t>(got));
    }
    return true;
}

} // namespace

std::string websocket_accept_key(std::string_view client_key) {
    std::string material(client_key);
    material += ws_guid;
    unsigned char digest[SHA_DIGEST_LENGTH];
    SHA1(reinterpret_cast<const unsigned char*>(material.data()), material.size(),
            digest);
    unsigned char encoded[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
    const int n = EVP_EncodeBlock(encoded, digest, SHA_DIGEST_LENGTH);
    return std::string(reinterpret_cast<char*>(encoded), static_cast<std::size_t>(n));
}

std::string encode_ws_frame(const ws_frame& frame, bool masked,
        std::uint32_t mask_key) {
    std::string out;
    out.push_back(static_cast<char>((frame.fin ? 0x80 : 0x00)
            | static_cast<std::uint8_t>(frame.opcode)));
    const std::uint8_t mask_bit = masked ? 0x80 : 0x00;
    const auto len = frame.payload.size();
    if (len < 126) {
        out.push_back(static_cast<char>(mask_bit | len));
    } else if (len <= 0xFFFF) {
        out.push_back(static_cast<char>(mask_bit | 126));
        out.push_back(static_cast<char>(len >> 8));
        out.push_back(static_cast<char>(len & 0xFF));
    } else {
        out.push_back(static_cast<char>(mask_bit | 127));
        for (int shift = 56; shift >= 0; shift -= 8)
            out.push_back(static_cast<char>((static_cast<std::uint64_t>(len) >> shift) & 0xFF));
    }
    if (!masked)
        return out + frame.payload;
    const char mask[4] = {static_cast<char>(mask_key >> 24),
            static_cast<char>(mask_key >> 16), static_cast<char>(mask_key >> 8),
            static_cast<char>(mask_key)};
    out.append(mask, 4);
    for (std::size_t i = 0; i < len; ++i)
        out.push_back(static_cast<char>(frame.payload[i] ^ mask[i % 4]));
    return out;
}

std::optional<ws_frame> read_ws_frame(int fd, std::string& buffer,
        std::size_t max_payload) {
    if (!need(fd, buffer, 2))
        return std::nullopt;
    const auto b0 = static_cast<std::uint8_t>(buffer[0]);
    const auto b1 = static_cast<std::uint8_t>(buffer[1]);
    if (b0 & 0x70)
        return std::nullopt;  // no extensions negotiated
    ws_frame frame;
    frame.fin = b0 & 0x80;
    frame.opcode = static_cast<ws_opcode>(b0 & 0x0F);
    const bool masked = b1 & 0x80;
    std::uint64_t len = b1 & 0x7F;
    std::size_t pos = 2;
    if (len == 126) {
        if (!need(fd, buffer, 4))
            return std::nullopt;
        len = (static_cast<std::uint8_t>(buffer[2]) << 8)
                | static_cast<std::uint8_t>(buffer[3]);
        pos = 4;
    } else if (len == 127) {
        if (!need(fd, buffer, 10))
            return std::nullopt;
        len = 0;
        for (int i = 0; i < 8; ++i)
            len = (len << 8) | static_cast<std::uint8_t>(buffer[2 + i]);
        pos = 10;
    }
    if (len > max_payload)
        return std::nullopt;
    char mask[4] = {};
    if (masked) {
        if (!need(fd, buffer, pos + 4))
            return std::nullopt;
        for (int i = 0; i < 4; ++i)
            mask[i] = buffer[pos + i];
        pos += 4;
    }
    if (!need(fd, buffer, pos + len))
        return std::nullopt;
    frame.payload = buffer.substr(pos, len);
    if (masked)
        for (std::size_t i = 0; i < frame.payload.size(); ++i)
            frame.payload[i] = static_cast<char>(frame.payload[i] ^ mask[i % 4]);
    buffer.erase(0, pos + len);
    return frame;
}

} // namespace dehum::net
