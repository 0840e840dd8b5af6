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

#include <cstdint>
#include <optional>
#include <span>

#include <dehum/modbus/pdu.hpp>
#include <dehum/plant/plant.hpp>

namespace dehum::plant {

struct slave_reply {
    modbus::pdu response;
    std::optional<std::uint16_t> new_a0;  // set by an accepted write
};

/// Answers one request against a plant snapshot. Address errors come back
/// as exception PDUs. Pure: the caller applies `new_a0`.
slave_reply slave_respond(const plant_state& state, const modbus::pdu& request);

/// The PLC's serial port. Frames with a bad CRC or for another unit are
/// dropped silently, as on a shared RS485 bus.
class rtu_slave {
public:
    explicit rtu_slave(std::uint8_t unit_id = 1) : unit_id_(unit_id) {}

    std::optional<modbus::bytes> handle(plant_state& state,
            std::span<const std::uint8_t> frame) const;

    std::uint8_t unit_id() const noexcept { return unit_id_; }

private:
    std::uint8_t unit_id_;
};

} // namespace dehum::plant
