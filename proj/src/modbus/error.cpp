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

#include <dehum/modbus/error.hpp>

namespace dehum::modbus {

const char* to_string(codec_errc errc) noexcept {
    switch (errc) {
    case codec_errc::invalid_pdu: return "InvalidPdu";
    case codec_errc::unknown_function: return "UnknownFunction";
    case codec_errc::truncated_pdu: return "TruncatedPdu";
    case codec_errc::byte_count_mismatch: return "ByteCountMismatch";
    case codec_errc::trailing_bytes: return "TrailingBytes";
    case codec_errc::invalid_unit: return "InvalidUnit";
    case codec_errc::crc_mismatch: return "CrcMismatch";
    case codec_errc::too_short: return "TooShort";
    case codec_errc::bad_protocol_id: return "BadProtocolId";
    case codec_errc::length_mismatch: return "LengthMismatch";
    case codec_errc::truncated_header: return "TruncatedHeader";
    }
    return "Unknown";
}

codec_error::codec_error(codec_errc errc, const std::string& detail)
    : std::runtime_error(std::string(to_string(errc)) + ": " + detail),
      errc_(errc) {}

} // namespace dehum::modbus
