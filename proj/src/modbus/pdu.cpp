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

#include <dehum/modbus/pdu.hpp>

#include <dehum/modbus/error.hpp>

namespace dehum::modbus {

namespace {

void put_u16(bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get_u16(std::span<const std::uint8_t> src, std::size_t pos) {
    return static_cast<std::uint16_t>((src[pos] << 8) | src[pos + 1]);
}

void check_quantity(std::size_t n, std::size_t lo, std::size_t hi,
        const char* what) {
    if (n < lo || n > hi)
        throw codec_error(codec_errc::invalid_pdu,
                std::string(what) + " quantity " + std::to_string(n)
                        + " outside [" + std::to_string(lo) + ","
                        + std::to_string(hi) + "]");
}

void check_exact(std::span<const std::uint8_t> src, std::size_t expected) {
    if (src.size() < expected)
        throw codec_error(codec_errc::truncated_pdu,
                "need " + std::to_string(expected) + " bytes, have "
                        + std::to_string(src.size()));
    if (src.size() > expected)
        throw codec_error(codec_errc::trailing_bytes,
                std::to_string(src.size() - expected) + " extra bytes");
}

bool valid_exception_code(std::uint8_t c) {
    return c >= 0x01 && c <= 0x04;
}

struct encoder {
    bytes& out;

    void operator()(const read_holding_request& p) {
        check_quantity(p.quantity, min_read_registers, max_read_registers,
                "read");
        out.push_back(0x03);
        put_u16(out, p.start);
        put_u16(out, p.quantity);
    }
    void operator()(const read_holding_response& p) {
        check_quantity(p.values.size(), min_read_registers,
                max_read_registers, "read response");
        out.push_back(0x03);
        out.push_back(static_cast<std::uint8_t>(2 * p.values.size()));
        for (auto v : p.values)
            put_u16(out, v);
    }
    void operator()(const write_single_request& p) {
        out.push_back(0x06);
        put_u16(out, p.address);
        put_u16(out, p.value);
    }
    void operator()(const write_single_response& p) {
        out.push_back(0x06);
        put_u16(out, p.address);
        put_u16(out, p.value);
    }
    void operator()(const write_multiple_request& p) {
        check_quantity(p.values.size(), min_write_registers,
                max_write_registers, "write");
        out.push_back(0x10);
        put_u16(out, p.start);
        put_u16(out, static_cast<std::uint16_t>(p.values.size()));
        out.push_back(static_cast<std::uint8_t>(2 * p.values.size()));
        for (auto v : p.values)
            put_u16(out, v);
    }
    void operator()(const write_multiple_response& p) {
        check_quantity(p.quantity, min_write_registers, max_write_registers,
                "write response");
        out.push_back(0x10);
        put_u16(out, p.start);
        put_u16(out, p.quantity);
    }
    void operator()(const exception_response& p) {
        if (p.function == 0 || (p.function & exception_flag))
            throw codec_error(codec_errc::invalid_pdu,
                    "exception for invalid function code");
        if (!valid_exception_code(static_cast<std::uint8_t>(p.code)))
            throw codec_error(codec_errc::invalid_pdu,
                    "unsupported exception code");
        out.push_back(static_cast<std::uint8_t>(p.function | exception_flag));
        out.push_back(static_cast<std::uint8_t>(p.code));
    }
};

std::vector<std::uint16_t> get_registers(
        std::span<const std::uint8_t> src, std::size_t pos, std::size_t n) {
    std::vector<std::uint16_t> regs;
    regs.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        regs.push_back(get_u16(src, pos + 2 * i));
    return regs;
}

pdu decode_read(std::span<const std::uint8_t> src, direction dir) {
    if (dir == direction::request) {
        check_exact(src, 5);
        read_holding_request req{get_u16(src, 1), get_u16(src, 3)};
        check_quantity(req.quantity, min_read_registers, max_read_registers,
                "read");
        return req;
    }
    if (src.size() < 2)
        throw codec_error(codec_errc::truncated_pdu, "missing byte count");
    const std::size_t byte_count = src[1];
    if (byte_count != src.size() - 2)
        throw codec_error(codec_errc::byte_count_mismatch,
                "declared " + std::to_string(byte_count) + ", carries "
                        + std::to_string(src.size() - 2));
    if (byte_count % 2 != 0)
        throw codec_error(codec_errc::byte_count_mismatch, "odd byte count");
    check_quantity(byte_count / 2, min_read_registers, max_read_registers,
            "read response");
    return read_holding_response{get_registers(src, 2, byte_count / 2)};
}

pdu decode_write_multiple(std::span<const std::uint8_t> src, direction dir) {
    if (dir == direction::response) {
        check_exact(src, 5);
        write_multiple_response rsp{get_u16(src, 1), get_u16(src, 3)};
        check_quantity(rsp.quantity, min_write_registers,
                max_write_registers, "write response");
        return rsp;
    }
    if (src.size() < 6)
        throw codec_error(codec_errc::truncated_pdu, "write header");
    const std::uint16_t start = get_u16(src, 1);
    const std::uint16_t quantity = get_u16(src, 3);
    const std::size_t byte_count = src[5];
    check_quantity(quantity, min_write_registers, max_write_registers,
            "write");
    if (byte_count != 2u * quantity)
        throw codec_error(codec_errc::byte_count_mismatch,
                "byte count disagrees with quantity");
    check_exact(src, 6 + byte_count);
    return write_multiple_request{start, get_registers(src, 6, quantity)};
}

} // namespace

std::string_view to_string(exception_code code) noexcept {
    switch (code) {
    case exception_code::illegal_function: return "IllegalFunction";
    case exception_code::illegal_data_address: return "IllegalDataAddress";
    case exception_code::illegal_data_value: return "IllegalDataValue";
    case exception_code::slave_device_failure: return "SlaveDeviceFailure";
    }
    return "Unknown";
}

void encode_pdu(const pdu& p, bytes& out) {
    std::visit(encoder{out}, p);
}

bytes encode_pdu(const pdu& p) {
    bytes out;
    out.reserve(8);
    encode_pdu(p, out);
    return out;
}

pdu decode_pdu(std::span<const std::uint8_t> src, direction dir) {
    if (src.empty())
        throw codec_error(codec_errc::truncated_pdu, "empty PDU");
    const std::uint8_t fc = src[0];

    if (fc & exception_flag) {
        if (dir == direction::request)
            throw codec_error(codec_errc::unknown_function,
                    "exception form in a request");
        check_exact(src, 2);
        if (!valid_exception_code(src[1]))
            throw codec_error(codec_errc::invalid_pdu,
                    "unsupported exception code");
        return exception_response{
                static_cast<std::uint8_t>(fc & ~exception_flag),
                static_cast<exception_code>(src[1])};
    }

    switch (fc) {
    case 0x03:
        return decode_read(src, dir);
    case 0x06:
        check_exact(src, 5);
        if (dir == direction::request)
            return write_single_request{get_u16(src, 1), get_u16(src, 3)};
        return write_single_response{get_u16(src, 1), get_u16(src, 3)};
    case 0x10:
        return decode_write_multiple(src, dir);
    default:
        throw codec_error(codec_errc::unknown_function,
                "function code " + std::to_string(fc));
    }
}

std::uint8_t wire_function(const pdu& p) noexcept {
    struct {
        std::uint8_t operator()(const read_holding_request&) { return 0x03; }
        std::uint8_t operator()(const read_holding_response&) { return 0x03; }
        std::uint8_t operator()(const write_single_request&) { return 0x06; }
        std::uint8_t operator()(const write_single_response&) { return 0x06; }
        std::uint8_t operator()(const write_multiple_request&) { return 0x10; }
        std::uint8_t operator()(const write_multiple_response&) { return 0x10; }
        std::uint8_t operator()(const exception_response& e) {
            return static_cast<std::uint8_t>(e.function | exception_flag);
        }
    } visitor;
    return std::visit(visitor, p);
}

} // namespace dehum::modbus
