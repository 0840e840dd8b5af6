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

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace dehum::net {

struct ci_less {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const noexcept;
};

struct http_request {
    std::string method;
    std::string path;
    std::map<std::string, std::string, std::less<>> query;
    std::map<std::string, std::string, ci_less> headers;
    std::string body;

    std::optional<std::string_view> header(std::string_view name) const;
    /// True if a comma-separated header contains `token` (case-insensitive).
    bool header_has_token(std::string_view name, std::string_view token) const;
};

/// Reads one HTTP/1.1 request (headers plus Content-Length body). Bytes
/// past the request stay in `buffer`. nullopt on EOF or malformed input.
std::optional<http_request> read_http_request(int fd, std::string& buffer,
        std::size_t max_body = 1 << 20);

/// Client side: a parsed response with its Content-Length body.
struct http_reply {
    int status{};
    std::map<std::string, std::string, ci_less> headers;
    std::string body;

    std::optional<std::string_view> header(std::string_view name) const;
};

std::optional<http_reply> read_http_reply(int fd, std::string& buffer,
        std::size_t max_body = 1 << 20);

std::string http_response(int status, std::string_view content_type,
        std::string_view body, std::string_view extra_headers = {});

std::string_view reason_phrase(int status) noexcept;

std::string url_decode(std::string_view s);

} // namespace dehum::net
