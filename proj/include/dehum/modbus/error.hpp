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

#include <stdexcept>
#include <string>

namespace dehum::modbus {

enum class codec_errc {
    invalid_pdu,
    unknown_function,
    truncated_pdu,
    byte_count_mismatch,
    trailing_bytes,
    invalid_unit,
    crc_mismatch,
    too_short,
    bad_protocol_id,
    length_mismatch,
    truncated_header,
};

const char* to_string(codec_errc errc) noexcept;

class codec_error : public std::runtime_error {
public:
    codec_error(codec_errc errc, const std::string& detail);

    codec_errc code() const noexcept { return errc_; }

private:
    codec_errc errc_;
};

} // namespace dehum::modbus
