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

#include <dehum/net/http.hpp>

#include <cctype>
#include <cerrno>
#include <sys/socket.h>

namespace dehum::net {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool iequal(std::string_view a, std::string_view b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i]))
                != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

bool fill(int fd, std::string& buffer) {
    char chunk[4096];
    for (;;) {
        ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR)
            continue;
        if (n <= 0)
            return false;
        buffer.append(chunk, static_cast<std::size_t>(n));
        return true;
    }
}

void parse_query(std::string_view q,
        std::map<std::string, std::string, std::less<>>& out) {
    while (!q.empty()) {
        auto amp = q.find('&');
        auto pair = q.substr(0, amp);
        auto eq = pair.find('=');
        if (eq == std::string_view::npos)
            out[url_decode(pair)] = "";
        else
            out[url_decode(pair.substr(0, eq))] = url_decode(pair.substr(eq + 1));
        if (amp == std::string_view::npos)
            break;
        q.remove_prefix(amp + 1);
    }
}

} // namespace

bool ci_less::operator()(std::string_view a, std::string_view b) const noexcept {
    const auto n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int ca = std::tolower(static_cast<unsigned char>(a[i]));
        const int cb = std::tolower(static_cast<unsigned char>(b[i]));
        if (ca != cb)
            return ca < cb;
    }
    return a.size() < b.size();
}

std::optional<std::string_view> http_request::header(std::string_view name) const {
    auto it = headers.find(name);
    if (it == headers.end())
        return std::nullopt;
    return std::string_view(it->second);
}

bool http_request::header_has_token(std::string_view name,
        std::string_view token) const {
    auto value = header(name);
    if (!value)
        return false;
    auto v = *value;
    while (!v.empty()) {
        auto comma = v.find(',');
        if (iequal(trim(v.substr(0, comma)), token))
            return true;
        if (comma == std::string_view::npos)
            break;
        v.remove_prefix(comma + 1);
    }
    return false;
}

std::string url_decode(std::string_view s) {
    auto hex = [](char c) {
        return std::isdigit(static_cast<unsigned char>(c))
                ? c - '0'
                : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10;
    };
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '+') {
            out.push_back(' ');
        } else if (s[i] == '%' && i + 2 < s.size()
                && std::isxdigit(static_cast<unsigned char>(s[i + 1]))
                && std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
            out.push_back(static_cast<char>(hex(s[i + 1]) * 16 + hex(s[i + 2])));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

namespace {

using header_map = std::map<std::string, std::string, ci_less>;

// Reads one header block plus its Content-Length body. Returns the start
// line; nullopt on EOF or malformed input.
std::optional<std::string> read_message(int fd, std::string& buffer,
        header_map& headers, std::string& body, std::size_t max_body) {
    constexpr std::size_t max_header = 16 * 1024;
    std::size_t end;
    while ((end = buffer.find("\r\n\r\n")) == std::string::npos) {
        if (buffer.size() > max_header || !fill(fd, buffer))
            return std::nullopt;
    }
    std::string_view head(buffer.data(), end);
    auto line_end = head.find("\r\n");
    std::string start_line(head.substr(0, line_end));

    auto rest = line_end == std::string_view::npos ? std::string_view{}
                                                   : head.substr(line_end + 2);
    while (!rest.empty()) {
        auto eol = rest.find("\r\n");
        auto line = rest.substr(0, eol);
        auto colon = line.find(':');
        if (colon == std::string_view::npos)
            return std::nullopt;
        headers[std::string(trim(line.substr(0, colon)))] =
                std::string(trim(line.substr(colon + 1)));
        if (eol == std::string_view::npos)
            break;
        rest.remove_prefix(eol + 2);
    }
    buffer.erase(0, end + 4);

    std::size_t length = 0;
    if (auto it = headers.find("Content-Length"); it != headers.end()) {
        try {
            length = std::stoul(it->second);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (length > max_body)
            return std::nullopt;
    }
    while (buffer.size() < length)
        if (!fill(fd, buffer))
            return std::nullopt;
    body = buffer.substr(0, length);
    buffer.erase(0, length);
    return start_line;
}

std::optional<std::string_view> find_header(const header_map& h, std::string_view name) {
    auto it = h.find(name);
    if (it == h.end())
        return std::nullopt;
    return std::string_view(it->second);
}

} // namespace

std::optional<http_request> read_http_request(int fd, std::string& buffer,
        std::size_t max_body) {
    http_request req;
    auto start = read_message(fd, buffer, req.headers, req.body, max_body);
    if (!start)
        return std::nullopt;
    std::string_view request_line(*start);
    auto sp1 = request_line.find(' ');
    auto sp2 = request_line.find(' ', sp1 + 1);
    if (sp1 == std::string_view::npos || sp2 == std::string_view::npos)
        return std::nullopt;
    req.method = std::string(request_line.substr(0, sp1));
    auto target = request_line.substr(sp1 + 1, sp2 - sp1 - 1);
    auto qmark = target.find('?');
    req.path = url_decode(target.substr(0, qmark));
    if (qmark != std::string_view::npos)
        parse_query(target.substr(qmark + 1), req.query);
    return req;
}

std::optional<std::string_view> http_reply::header(std::string_view name) const {
    return find_header(headers, name);
}

std::optional<http_reply> read_http_reply(int fd, std::string& buffer,
        std::size_t max_body) {
    http_reply reply;
    auto start = read_message(fd, buffer, reply.headers, reply.body, max_body);
    if (!start || start->rfind("HTTP/1.", 0) != 0)
        return std::nullopt;
    auto sp = start->find(' ');
    if (sp == std::string::npos)
        return std::nullopt;
    try {
        reply.status = std::stoi(start->substr(sp + 1, 3));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return reply;
}

std::string_view reason_phrase(int status) noexcept {
    switch (status) {
    case 101: return "Switching Protocols";
    case 200: return "OK";
    case 400: return "Bad Request";
    case 401: return "Unauthorized";
    case 404: return "Not Found";
    case 405: return "Method Not Allowed";
    case 426: return "Upgrade Required";
    case 503: return "Service Unavailable";
    default: return "Error";
    }
}

std::string http_response(int status, std::string_view content_type,
        std::string_view body, std::string_view extra_headers) {
    std::string out = "HTTP/1.1 " + std::to_string(status) + " "
            + std::string(reason_phrase(status)) + "\r\n";
    out += "Content-Type: " + std::string(content_type) + "\r\n";
    out += "Content-Length: " + std::to_string(body.size()) + "\r\n";
    out += "Cache-Control: no-store\r\n";
    out += extra_headers;
    out += "\r\n";
    out += body;
    return out;
}

} // namespace dehum::net
