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

#include <dehum/cli/modbus_client.hpp>

#include <dehum/modbus/error.hpp>
#include <dehum/modbus/framing.hpp>

namespace dehum::cli {

using namespace modbus;

modbus_tcp_client::modbus_tcp_client(const net::endpoint& server, std::uint8_t unit_id,
        std::chrono::milliseconds timeout)
    : socket_(net::connect_tcp(server, timeout)), unit_id_(unit_id), timeout_(timeout) {}

pdu modbus_tcp_client::transact(const pdu& request) {
    const auto tid = next_tid_++;
    net::write_all(socket_.get(), encode_mbap({tid, unit_id_, request}));

    const int wait = static_cast<int>(timeout_.count());
    bytes adu(mbap_header_size);
    if (!net::read_exact(socket_.get(), adu, wait))
        throw net::net_error(net::net_errc::io_error, "no response from server");
    const auto header = parse_mbap_header(adu);
    adu.resize(mbap_header_size + header.length - 1);
    if (!net::read_exact(socket_.get(),
                std::span(adu).subspan(mbap_header_size), wait))
        throw net::net_error(net::net_errc::io_error, "truncated response");
    auto frame = decode_mbap(adu, direction::response);
    if (frame.transaction_id != tid)
        throw codec_error(codec_errc::invalid_pdu, "transaction id mismatch");
    if (wire_function(frame.body) != wire_function(request)
            && !std::holds_alternative<exception_response>(frame.body))
        throw codec_error(codec_errc::invalid_pdu, "function code mismatch");
    return frame.body;
}

namespace {

template <typename T>
modbus_result<T> expect(const pdu& reply) {
    if (auto* ex = std::get_if<exception_response>(&reply))
        return ex->code;
    if (auto* ok = std::get_if<T>(&reply))
        return *ok;
    throw codec_error(codec_errc::invalid_pdu, "unexpected response type");
}

} // namespace

modbus_result<std::vector<std::uint16_t>> modbus_tcp_client::read_holding(
        std::uint16_t start, std::uint16_t quantity) {
    auto r = expect<read_holding_response>(transact(read_holding_request{start, quantity}));
    if (auto* ex = std::get_if<exception_code>(&r))
        return *ex;
    auto values = std::get<read_holding_response>(r).values;
    if (values.size() != quantity)
        throw codec_error(codec_errc::byte_count_mismatch, "register count mismatch");
    return values;
}

modbus_result<write_single_response> modbus_tcp_client::write_single(
        std::uint16_t address, std::uint16_t value) {
    return expect<write_single_response>(transact(write_single_request{address, value}));
}

modbus_result<write_multiple_response> modbus_tcp_client::write_multiple(
        std::uint16_t start, std::vector<std::uint16_t> values) {
    return expect<write_multiple_response>(
            transact(write_multiple_request{start, std::move(values)}));
}

} // namespace dehum::cli
