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

#include <dehum/net/socket.hpp>

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

namespace dehum::net {

namespace {

std::string errno_text() {
    return std::strerror(errno);
}

struct addrinfo_ptr {
    addrinfo* ai{nullptr};
    ~addrinfo_ptr() {
        if (ai)
            freeaddrinfo(ai);
    }
};

addrinfo_ptr resolve(const endpoint& ep, bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (passive)
        hints.ai_flags = AI_PASSIVE;
    addrinfo_ptr res;
    const auto port = std::to_string(ep.port);
    const char* host = ep.host.empty() ? nullptr : ep.host.c_str();
    if (int rc = getaddrinfo(host, port.c_str(), &hints, &res.ai); rc != 0)
        throw net_error(net_errc::resolve_failed,
                ep.to_string() + ": " + gai_strerror(rc));
    return res;
}

} // namespace

const char* to_string(net_errc errc) noexcept {
    switch (errc) {
    case net_errc::port_in_use: return "PortInUse";
    case net_errc::connection_refused: return "ConnectionRefused";
    case net_errc::resolve_failed: return "ResolveFailed";
    case net_errc::io_error: return "IoError";
    }
    return "Unknown";
}

net_error::net_error(net_errc errc, const std::string& detail)
    : std::runtime_error(std::string(to_string(errc)) + ": " + detail),
      errc_(errc) {}

void socket_fd::close() noexcept {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void socket_fd::shutdown() noexcept {
    if (fd_ >= 0)
        ::shutdown(fd_, SHUT_RDWR);
}

endpoint endpoint::parse(std::string_view text, const endpoint& defaults) {
    endpoint ep = defaults;
    auto colon = text.rfind(':');
    std::string_view host = text, port;
    if (colon != std::string_view::npos) {
        host = text.substr(0, colon);
        port = text.substr(colon + 1);
    } else if (!text.empty()
            && text.find_first_not_of("0123456789") == std::string_view::npos) {
        host = {};
        port = text;
    }
    if (!host.empty())
        ep.host = std::string(host);
    if (!port.empty()) {
        unsigned long v = 0;
        try {
            v = std::stoul(std::string(port));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad port in '" + std::string(text) + "'");
        }
        if (v > 65535)
            throw std::invalid_argument("bad port in '" + std::string(text) + "'");
        ep.port = static_cast<std::uint16_t>(v);
    }
    return ep;
}

std::string endpoint::to_string() const {
    return host + ":" + std::to_string(port);
}

socket_fd listen_tcp(const endpoint& ep, int backlog) {
    auto res = resolve(ep, true);
    int last_errno = 0;
    for (auto* ai = res.ai; ai; ai = ai->ai_next) {
        socket_fd s(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC,
                ai->ai_protocol));
        if (!s.valid())
            continue;
        int one = 1;
        ::setsockopt(s.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (::bind(s.get(), ai->ai_addr, ai->ai_addrlen) == 0
                && ::listen(s.get(), backlog) == 0)
            return s;
        last_errno = errno;
    }
    if (last_errno == EADDRINUSE)
        throw net_error(net_errc::port_in_use, ep.to_string());
    throw net_error(net_errc::io_error,
            ep.to_string() + ": " + std::strerror(last_errno));
}

std::uint16_t local_port(const socket_fd& s) {
    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    if (::getsockname(s.get(), reinterpret_cast<sockaddr*>(&addr), &len) != 0)
        throw net_error(net_errc::io_error, errno_text());
    if (addr.ss_family == AF_INET6)
        return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
    return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

socket_fd connect_tcp(const endpoint& ep, std::chrono::milliseconds timeout) {
    auto res = resolve(ep, false);
    std::string why = "no address";
    for (auto* ai = res.ai; ai; ai = ai->ai_next) {
        socket_fd s(::socket(ai->ai_family,
                ai->ai_socktype | SOCK_CLOEXEC | SOCK_NONBLOCK, ai->ai_protocol));
        if (!s.valid())
            continue;
        int rc = ::connect(s.get(), ai->ai_addr, ai->ai_addrlen);
        if (rc != 0 && errno == EINPROGRESS) {
            pollfd pfd{s.get(), POLLOUT, 0};
            rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
            if (rc == 1) {
                int err = 0;
                socklen_t len = sizeof err;
                ::getsockopt(s.get(), SOL_SOCKET, SO_ERROR, &err, &len);
                rc = err == 0 ? 0 : -1;
                errno = err;
            } else {
                rc = -1;
                errno = ETIMEDOUT;
            }
        }
        if (rc == 0) {
            int flags = ::fcntl(s.get(), F_GETFL);
            ::fcntl(s.get(), F_SETFL, flags & ~O_NONBLOCK);
            int one = 1;
            ::setsockopt(s.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return s;
        }
        why = errno_text();
    }
    throw net_error(net_errc::connection_refused, ep.to_string() + ": " + why);
}

std::optional<socket_fd> accept_for(const socket_fd& listener, int timeout_ms) {
    if (!wait_readable(listener.get(), timeout_ms))
        return std::nullopt;
    socket_fd s(::accept4(listener.get(), nullptr, nullptr, SOCK_CLOEXEC));
    if (!s.valid())
        return std::nullopt;
    int one = 1;
    ::setsockopt(s.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return s;
}

bool wait_readable(int fd, int timeout_ms) {
    pollfd pfd{fd, POLLIN, 0};
    for (;;) {
        int rc = ::poll(&pfd, 1, timeout_ms);
        if (rc < 0 && errno == EINTR)
            continue;
        return rc > 0;
    }
}

bool read_exact(int fd, std::span<std::uint8_t> dst, int timeout_ms) {
    std::size_t got = 0;
    while (got < dst.size()) {
        if (timeout_ms >= 0 && !wait_readable(fd, timeout_ms))
            return false;
        ssize_t n = ::recv(fd, dst.data() + got, dst.size() - got, 0);
        if (n < 0 && errno == EINTR)
            continue;
        if (n <= 0)
            return false;
        got += static_cast<std::size_t>(n);
    }
    return true;
}

bool read_line(int fd, std::string& line, std::string& buffer,
        std::size_t max_len) {
    for (;;) {
        auto nl = buffer.find('\n');
        if (nl != std::string::npos) {
            line.assign(buffer, 0, nl);
            buffer.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            return true;
        }
        if (buffer.size() > max_len)
            return false;
        char chunk[4096];
        ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR)
            continue;
        if (n <= 0)
            return false;
        buffer.append(chunk, static_cast<std::size_t>(n));
    }
}

void write_all(int fd, std::span<const std::uint8_t> src) {
    std::size_t sent = 0;
    while (sent < src.size()) {
        ssize_t n = ::send(fd, src.data() + sent, src.size() - sent, MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR)
            continue;
        if (n <= 0)
            throw net_error(net_errc::io_error, errno_text());
        sent += static_cast<std::size_t>(n);
    }
}

void write_all(int fd, std::string_view src) {
    write_all(fd, std::span<const std::uint8_t>(
            reinterpret_cast<const std::uint8_t*>(src.data()), src.size()));
}

} // namespace dehum::net
