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

#include <dehum/gateway/modbus_server.hpp>

#include <dehum/modbus/error.hpp>

namespace dehum::gateway {

using namespace modbus;
using registers::in_map;

namespace {

bool writable(std::uint32_t address) {
    const auto* e = registers::register_map::instance().find(address);
    return e && e->writable;
}

exception_response make_exception(function_code fc, exception_code code) {
    return {static_cast<std::uint8_t>(fc), code};
}

struct mirror_responder {
    const register_mirror& mirror;
    write_queue& writes;

    pdu operator()(const read_holding_request& req) const {
        const std::uint32_t last = std::uint32_t{req.start} + req.quantity - 1;
        if (!in_map(req.start) || !in_map(last))
            return make_exception(function_code::read_holding_registers,
                    exception_code::illegal_data_address);
        auto snap = mirror.load();
        if (!snap)
            return make_exception(function_code::read_holding_registers,
                    exception_code::slave_device_failure);
        read_holding_response rsp;
        for (std::uint32_t a = req.start; a <= last; ++a)
            rsp.values.push_back(snap->at(static_cast<std::uint16_t>(a)));
        return rsp;
    }

    pdu operator()(const write_single_request& req) const {
        if (!writable(req.address))
            return make_exception(function_code::write_single_register,
                    exception_code::illegal_data_address);
        if (!writes.try_push({req.address, {req.value}}))
            return make_exception(function_code::write_single_register,
                    exception_code::slave_device_failure);
        return write_single_response{req.address, req.value};
    }

    pdu operator()(const write_multiple_request& req) const {
        for (std::size_t i = 0; i < req.values.size(); ++i)
            if (!writable(std::uint32_t{req.start} + i))
                return make_exception(function_code::write_multiple_registers,
                        exception_code::illegal_data_address);
        if (!writes.try_push({req.start, req.values}))
            return make_exception(function_code::write_multiple_registers,
                    exception_code::slave_device_failure);
        return write_multiple_response{
                req.start, static_cast<std::uint16_t>(req.values.size())};
    }

    template <typename Other>
    pdu operator()(const Other& other) const {
        return exception_response{wire_function(other),
                exception_code::illegal_function};
    }
};

} // namespace

mbap_frame serve_modbus_tcp(const mbap_frame& request,
        const register_mirror& mirror, write_queue& writes) {
    return {request.transaction_id, request.unit_id,
            std::visit(mirror_responder{mirror, writes}, request.body)};
}

std::optional<bytes> serve_modbus_tcp_adu(std::span<const std::uint8_t> adu,
        const register_mirror& mirror, write_queue& writes) {
    mbap_header header;
    try {
        header = parse_mbap_header(adu);
    } catch (const codec_error&) {
        return std::nullopt;
    }
    if (adu.size() != mbap_header_size + header.length - 1u)
        return std::nullopt;

    const auto pdu_bytes = adu.subspan(mbap_header_size);
    try {
        return encode_mbap(serve_modbus_tcp(
                {header.transaction_id, header.unit_id,
                        decode_pdu(pdu_bytes, direction::request)},
                mirror, writes));
    } catch (const codec_error& e) {
        const std::uint8_t fc = pdu_bytes[0] & static_cast<std::uint8_t>(~exception_flag);
        if (fc == 0)
            return std::nullopt;
        const auto code = e.code() == codec_errc::unknown_function
                ? exception_code::illegal_function
                : exception_code::illegal_data_value;
        return encode_mbap({header.transaction_id, header.unit_id,
                exception_response{fc, code}});
    }
}

modbus_tcp_server::modbus_tcp_server(const net::endpoint& listen_at,
        const register_mirror& mirror, write_queue& writes)
    : listener_(net::listen_tcp(listen_at)),
      port_(net::local_port(listener_)),
      mirror_(mirror),
      writes_(writes) {}

modbus_tcp_server::~modbus_tcp_server() {
    stop();
}

void modbus_tcp_server::start() {
    if (running_.exchange(true))
        return;
    acceptor_ = std::thread([this] {
        while (running_) {
            auto conn = net::accept_for(listener_, 100);
            if (!conn)
                continue;
            std::lock_guard lock(conns_mutex_);
            // Reap finished connections.
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

void modbus_tcp_server::serve(net::socket_fd& conn) {
    const int fd = conn.get();
    bytes adu;
    while (running_) {
        adu.resize(mbap_header_size);
        if (!net::wait_readable(fd, 100))
            continue;
        if (!net::read_exact(fd, adu, 1000))
            break;
        mbap_header header;
        try {
            header = parse_mbap_header(adu);
        } catch (const codec_error&) {
            break;
        }
        adu.resize(mbap_header_size + header.length - 1u);
        if (!net::read_exact(fd, std::span(adu).subspan(mbap_header_size), 1000))
            break;
        auto reply = serve_modbus_tcp_adu(adu, mirror_, writes_);
        if (!reply)
            break;
        try {
            net::write_all(fd, *reply);
        } catch (const net::net_error&) {
            break;
        }
    }
    std::lock_guard lock(conns_mutex_);
    conn.close();
}

void modbus_tcp_server::stop() {
    if (!running_.exchange(false))
        return;
    if (acceptor_.joinable())
        acceptor_.join();
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

} // namespace dehum::gateway
