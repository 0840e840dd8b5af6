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

#include <doctest.h>

#include <random>

#include <dehum/modbus/crc16.hpp>
#include <dehum/modbus/error.hpp>
#include <dehum/modbus/framing.hpp>
#include <dehum/modbus/pdu.hpp>

#include "../support/oracles.hpp"

using namespace dehum::modbus;

namespace {

codec_errc error_of(auto&& fn) {
    try {
        fn();
    } catch (const codec_error& e) {
        return e.code();
    }
    FAIL("expected codec_error");
    return codec_errc::invalid_pdu;
}

} // namespace

TEST_CASE("crc16 known answers") {
    const bytes check{'1', '2', '3', '4', '5', '6', '7', '8', '9'};
    CHECK(crc16(check) == 0x4B37);
    CHECK(oracle::crc16_bitwise(check) == 0x4B37);

    const bytes read_10{0x01, 0x03, 0x00, 0x00, 0x00, 0x0A};
    CHECK(crc16(read_10) == 0xCDC5);
    const bytes read_map{0x01, 0x03, 0x0F, 0xA0, 0x00, 0x0A};
    CHECK(crc16(read_map) == 0xFBC6);
    CHECK(crc16(bytes{}) == 0xFFFF);
}

TEST_CASE("crc16 matches the bit-serial oracle on random input") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        bytes data(rng() % 300);
        for (auto& b : data)
            b = static_cast<std::uint8_t>(rng());
        REQUIRE(crc16(data) == oracle::crc16_bitwise(data));
    }
}

TEST_CASE("read request frames on the wire") {
    const pdu req = read_holding_request{4000, 10};
    CHECK(encode_pdu(req) == bytes{0x03, 0x0F, 0xA0, 0x00, 0x0A});
    CHECK(encode_rtu({1, req}) == bytes{0x01, 0x03, 0x0F, 0xA0, 0x00, 0x0A, 0xC6, 0xFB});
    CHECK(encode_mbap({0x1234, 1, req})
            == bytes{0x12, 0x34, 0x00, 0x00, 0x00, 0x06, 0x01, 0x03, 0x0F, 0xA0, 0x00, 0x0A});
}

TEST_CASE("response and exception encodings") {
    CHECK(encode_pdu(read_holding_response{{0x1549, 0x0000}})
            == bytes{0x03, 0x04, 0x15, 0x49, 0x00, 0x00});
    CHECK(encode_pdu(write_single_response{4000, 7}) == bytes{0x06, 0x0F, 0xA0, 0x00, 0x07});
    CHECK(encode_pdu(write_multiple_request{4000, {1, 2}})
            == bytes{0x10, 0x0F, 0xA0, 0x00, 0x02, 0x04, 0x00, 0x01, 0x00, 0x02});
    CHECK(encode_pdu(exception_response{0x03, exception_code::illegal_data_address})
            == bytes{0x83, 0x02});
    CHECK(decode_pdu(bytes{0x90, 0x04}, direction::response)
            == pdu{exception_response{0x10, exception_code::slave_device_failure}});
    CHECK(to_string(exception_code::illegal_data_address) == "IllegalDataAddress");
}

TEST_CASE("malformed PDUs are rejected with a specific error") {
    CHECK(error_of([] { decode_pdu(bytes{}, direction::request); }) == codec_errc::truncated_pdu);
    CHECK(error_of([] { decode_pdu(bytes{0x04, 0, 0, 0, 1}, direction::request); })
            == codec_errc::unknown_function);
    CHECK(error_of([] { decode_pdu(bytes{0x03, 0x0F, 0xA0, 0x00}, direction::request); })
            == codec_errc::truncated_pdu);
    CHECK(error_of([] { decode_pdu(bytes{0x03, 0x0F, 0xA0, 0x00, 0x01, 0x00}, direction::request); })
            == codec_errc::trailing_bytes);
    CHECK(error_of([] { decode_pdu(bytes{0x03, 0x0F, 0xA0, 0x00, 0x00}, direction::request); })
            == codec_errc::invalid_pdu);
    CHECK(error_of([] { decode_pdu(bytes{0x03, 0x0F, 0xA0, 0x00, 0x7E}, direction::request); })
            == codec_errc::invalid_pdu);
    CHECK(error_of([] { decode_pdu(bytes{0x03, 0x04, 0x00, 0x01}, direction::response); })
            == codec_errc::byte_count_mismatch);
    CHECK(error_of([] { decode_pdu(bytes{0x03, 0x03, 0x00, 0x01, 0x02}, direction::response); })
            == codec_errc::byte_count_mismatch);
    CHECK(error_of([] {
        decode_pdu(bytes{0x10, 0x0F, 0xA0, 0x00, 0x02, 0x03, 0x00, 0x01, 0x00}, direction::request);
    }) == codec_errc::byte_count_mismatch);
    CHECK(error_of([] { decode_pdu(bytes{0x83, 0x07}, direction::response); })
            == codec_errc::invalid_pdu);
    CHECK(error_of([] { decode_pdu(bytes{0x83, 0x02}, direction::request); })
            == codec_errc::unknown_function);
    CHECK(error_of([] { encode_pdu(read_holding_request{0, 126}); }) == codec_errc::invalid_pdu);
    CHECK(error_of([] { encode_pdu(write_multiple_request{0, {}}); }) == codec_errc::invalid_pdu);
}

TEST_CASE("rtu framing errors") {
    auto frame = encode_rtu({1, read_holding_request{4000, 12}});
    CHECK(error_of([&] { decode_rtu(std::span(frame).first(3), direction::request); })
            == codec_errc::too_short);
    frame.back() ^= 0x01;
    CHECK(error_of([&] { decode_rtu(frame, direction::request); }) == codec_errc::crc_mismatch);
    CHECK(error_of([] { encode_rtu({0, read_holding_request{0, 1}}); }) == codec_errc::invalid_unit);
    CHECK(error_of([] { encode_rtu({248, read_holding_request{0, 1}}); }) == codec_errc::invalid_unit);

    // Valid CRC around a broadcast address is still refused.
    bytes broadcast{0x00, 0x03, 0x0F, 0xA0, 0x00, 0x01};
    const auto crc = oracle::crc16_bitwise(broadcast);
    broadcast.push_back(static_cast<std::uint8_t>(crc & 0xFF));
    broadcast.push_back(static_cast<std::uint8_t>(crc >> 8));
    CHECK(error_of([&] { decode_rtu(broadcast, direction::request); }) == codec_errc::invalid_unit);
}

TEST_CASE("mbap framing errors") {
    auto adu = encode_mbap({1, 1, read_holding_request{4000, 12}});
    CHECK(error_of([&] { parse_mbap_header(std::span(adu).first(6)); })
            == codec_errc::truncated_header);
    auto bad_proto = adu;
    bad_proto[3] = 1;
    CHECK(error_of([&] { decode_mbap(bad_proto, direction::request); })
            == codec_errc::bad_protocol_id);
    auto long_len = adu;
    long_len[5] = 7;
    CHECK(error_of([&] { decode_mbap(long_len, direction::request); })
            == codec_errc::length_mismatch);
    auto zero_len = adu;
    zero_len[5] = 1;
    CHECK(error_of([&] { parse_mbap_header(zero_len); }) == codec_errc::length_mismatch);
}

TEST_CASE("randomized roundtrips under both framings") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 2000; ++i) {
        const auto dir = (i % 2) ? direction::request : direction::response;
        const auto body = oracle::random_pdu(rng, dir);
        const auto unit = static_cast<std::uint8_t>(1 + rng() % 247);
        const auto tid = static_cast<std::uint16_t>(rng());

        const rtu_frame rtu{unit, body};
        REQUIRE(decode_rtu(encode_rtu(rtu), dir) == rtu);
        const mbap_frame mbap{tid, unit, body};
        REQUIRE(decode_mbap(encode_mbap(mbap), dir) == mbap);
        REQUIRE(decode_pdu(encode_pdu(body), dir) == body);
    }
}

TEST_CASE("every single-bit flip of an RTU frame is caught by the CRC") {
    std::mt19937_64 rng(99);
    for (int f = 0; f < 25; ++f) {
        const auto dir = (f % 2) ? direction::request : direction::response;
        const auto frame = encode_rtu({1, oracle::random_pdu(rng, dir)});
        for (std::size_t bit = 0; bit < frame.size() * 8; ++bit) {
            auto bad = frame;
            bad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
            REQUIRE(error_of([&] { decode_rtu(bad, dir); }) == codec_errc::crc_mismatch);
        }
    }
}
