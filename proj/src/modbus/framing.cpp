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

#include <dehum/modbus/framing.hpp>

#include <dehum/modbus/crc16.hpp>
#include <dehum/modbus/error.hpp>

namespace dehum::modbus {

bytes encode_rtu(const rtu_frame& frame) {
    if (frame.unit_id < min_unit_id || frame.unit_id > max_unit_id)
        throw codec_error(codec_errc::invalid_unit,
                "unit " + std::to_string(frame.unit_id));
    bytes out;
    out.reserve(8);
    out.push_back(frame.unit_id);
    encode_pdu(frame.body, out);
    const auto crc = crc16(out);
    out.push_back(static_cast<std::uint8_t>(crc & 0xFF));
    out.push_back(static_cast<std::uint8_t>(crc >> 8));
    return out;
}

rtu_frame decode_rtu(std::span<const std::uint8_t> src, direction dir) {
    if (src.size() < rtu_min_size)
        throw codec_error(codec_errc::too_short,
                std::to_string(src.size()) + " bytes");
    const auto body = src.first(src.size() - 2);
    const std::uint16_t carried = static_cast<std::uint16_t>(
            src[src.size() - 2] | (src[src.size() - 1] << 8));
    if (crc16(body) != carried)
        throw codec_error(codec_errc::crc_mismatch, "frame discarded");
    const std::uint8_t unit = body[0];
    if (unit < min_unit_id || unit > max_unit_id)
        throw codec_error(codec_errc::invalid_unit,
                "unit " + std::to_string(unit));
    return rtu_frame{unit, decode_pdu(body.subspan(1), dir)};
}

mbap_header parse_mbap_header(std::span<const std::uint8_t> src) {
    if (src.size() < mbap_header_size)
        throw codec_error(codec_errc::truncated_header,
                std::to_string(src.size()) + " bytes");
    mbap_header h;
    h.transaction_id = static_cast<std::uint16_t>((src[0] << 8) | src[1]);
    h.protocol_id = static_cast<std::uint16_t>((src[2] << 8) | src[3]);
    h.length = static_cast<std::uint16_t>((src[4] << 8) | src[5]);
    h.unit_id = src[6];
    if (h.protocol_id != modbus_protocol_id)
        throw codec_error(codec_errc::bad_protocol_id,
                "protocol id " + std::to_string(h.protocol_id));
    // Unit byte plus at least a function code, at most a full PDU.
    if (h.length < 2 || h.length > max_pdu_size + 1)
        throw codec_error(codec_errc::length_mismatch,
                "length field " + std::to_string(h.length));
    return h;
}

bytes encode_mbap(const mbap_frame& frame) {
    bytes out(mbap_header_size);
    encode_pdu(frame.body, out);
    const auto length = static_cast<std::uint16_t>(out.size() - 6);
    out[0] = static_cast<std::uint8_t>(frame.transaction_id >> 8);
    out[1] = static_cast<std::uint8_t>(frame.transaction_id & 0xFF);
    out[2] = 0;
    out[3] = 0;
    out[4] = static_cast<std::uint8_t>(length >> 8);
    out[5] = static_cast<std::uint8_t>(length & 0xFF);
    out[6] = frame.unit_id;
    return out;
}

mbap_frame decode_mbap(std::span<const std::uint8_t> src, direction dir) {
    const auto h = parse_mbap_header(src);
    if (src.size() != mbap_header_size + h.length - 1u)
        throw codec_error(codec_errc::length_mismatch,
                "length field " + std::to_string(h.length) + ", frame "
                        + std::to_string(src.size()) + " bytes");
    return mbap_frame{h.transaction_id, h.unit_id,
            decode_pdu(src.subspan(mbap_header_size), dir)};
}

} // namespace dehum::modbus
