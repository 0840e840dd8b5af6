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

#include <dehum/plant/slave.hpp>

#include <dehum/modbus/crc16.hpp>
#include <dehum/modbus/error.hpp>
#include <dehum/modbus/framing.hpp>

namespace dehum::plant {

namespace {

using namespace modbus;
using registers::base_address;
using registers::in_map;

exception_response illegal_address(function_code fc) {
    return {static_cast<std::uint8_t>(fc), exception_code::illegal_data_address};
}

bool writable(std::uint32_t address) {
    const auto* e = registers::register_map::instance().find(address);
    return e && e->writable;
}

struct responder {
    const plant_state& state;

    slave_reply operator()(const read_holding_request& req) const {
        const std::uint32_t last = std::uint32_t{req.start} + req.quantity - 1;
        if (!in_map(req.start) || !in_map(last))
            return {illegal_address(function_code::read_holding_registers), {}};
        read_holding_response rsp;
        rsp.values.reserve(req.quantity);
        for (std::uint32_t a = req.start; a <= last; ++a)
            rsp.values.push_back(
                    register_value(state, static_cast<std::uint16_t>(a)));
        return {rsp, {}};
    }

    slave_reply operator()(const write_single_request& req) const {
        if (!writable(req.address))
            return {illegal_address(function_code::write_single_register), {}};
        return {write_single_response{req.address, req.value}, req.value};
    }

    slave_reply operator()(const write_multiple_request& req) const {
        for (std::size_t i = 0; i < req.values.size(); ++i)
            if (!writable(std::uint32_t{req.start} + i))
                return {illegal_address(function_code::write_multiple_registers),
                        {}};
        return {write_multiple_response{req.start,
                        static_cast<std::uint16_t>(req.values.size())},
                req.values.back()};
    }

    template <typename Other>
    slave_reply operator()(const Other& other) const {
        return {exception_response{wire_function(other),
                        exception_code::illegal_function},
                {}};
    }
};

} // namespace

slave_reply slave_respond(const plant_state& state, const modbus::pdu& request) {
    return std::visit(responder{state}, request);
}

std::optional<modbus::bytes> rtu_slave::handle(plant_state& state,
        std::span<const std::uint8_t> frame) const {
    if (frame.size() < rtu_min_size)
        return std::nullopt;
    const std::uint16_t carried = static_cast<std::uint16_t>(
            frame[frame.size() - 2] | (frame[frame.size() - 1] << 8));
    if (crc16(frame.first(frame.size() - 2)) != carried)
        return std::nullopt;
    if (frame[0] != unit_id_)
        return std::nullopt;

    pdu request;
    try {
        request = decode_rtu(frame, direction::request).body;
    } catch (const codec_error& e) {
        const std::uint8_t fc = frame[1] & static_cast<std::uint8_t>(~exception_flag);
        if (fc == 0)
            return std::nullopt;
        const auto code = e.code() == codec_errc::unknown_function
                ? exception_code::illegal_function
                : exception_code::illegal_data_value;
        return encode_rtu({unit_id_, exception_response{fc, code}});
    }

    auto reply = slave_respond(state, request);
    if (reply.new_a0)
        state.a0 = *reply.new_a0;
    return encode_rtu({unit_id_, std::move(reply.response)});
}

} // namespace dehum::plant
