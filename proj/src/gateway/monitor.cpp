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

#include <dehum/gateway/monitor.hpp>

#include <dehum/gateway/auth.hpp>

namespace dehum::gateway {

using nlohmann::json;

const char* to_string(bridge_errc errc) noexcept {
    switch (errc) {
    case bridge_errc::bad_command: return "BadCommand";
    case bridge_errc::unknown_fault: return "UnknownFault";
    case bridge_errc::unknown_target: return "UnknownTarget";
    case bridge_errc::bench_unavailable: return "BenchUnavailable";
    }
    return "Unknown";
}

bridge_error::bridge_error(bridge_errc errc, const std::string& detail)
    : std::runtime_error(std::string(to_string(errc)) + ": " + detail),
      errc_(errc) {}

json link_stats_json(const link::link_stats& s) {
    return {
        {"frames_sent", s.frames_sent},
        {"frames_dropped", s.frames_dropped},
        {"frames_corrupted", s.frames_corrupted},
        {"bits_flipped", s.bits_flipped},
        {"bits_delivered", s.bits_delivered},
    };
}

json poll_stats_json(const poll_stats& s) {
    return {
        {"cycles", s.cycles},
        {"updates", s.updates},
        {"failed_cycles", s.failed_cycles},
        {"timeouts", s.timeouts},
        {"crc_errors", s.crc_errors},
        {"exceptions", s.exceptions},
        {"invalid_responses", s.invalid_responses},
        {"writes_forwarded", s.writes_forwarded},
        {"writes_rejected", s.writes_rejected},
    };
}

json snapshot_message(const mirror_snapshot* snap, std::int64_t now_ms,
        const link::link_stats& link, const poll_stats& poll, bool heartbeat) {
    json msg = {
        {"type", "snapshot"},
        {"heartbeat", heartbeat},
        {"link_stats", link_stats_json(link)},
        {"poll_stats", poll_stats_json(poll)},
        {"sent_ms", now_ms},
    };
    if (!snap) {
        msg["available"] = false;
        msg["engineering"] = json::object();
        msg["alarms"] = json::array();
        msg["status"] = "UNKNOWN";
        msg["staleness_ms"] = nullptr;
        return msg;
    }
    json eng = json::object();
    for (const auto& e : registers::register_map::instance().entries()) {
        if (e.address == registers::alarms_address
                || e.address == registers::status_address)
            continue;
        eng[std::string(e.plc_label)] = snap->engineering(e.address).magnitude;
    }
    msg["available"] = true;
    msg["engineering"] = std::move(eng);
    msg["registers"] = snap->registers;
    msg["alarm_word"] = snap->alarm_word();
    msg["alarms"] = snap->alarms().names();
    msg["status"] = std::string(registers::to_string(snap->status()));
    msg["staleness_ms"] = snap->staleness_ms(now_ms);
    msg["last_update_ms"] = snap->last_update_ms;
    msg["poll_started_ms"] = snap->poll_started_ms;
    msg["sequence"] = snap->sequence;
    msg["poll_failures_since_update"] = snap->poll_failures_since_update;
    return msg;
}

plant::bench_command parse_bridge_command(const json& msg) {
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
        throw bridge_error(bridge_errc::bad_command, "missing 'type'");
    const auto type = msg["type"].get<std::string>();

    if (type == "key") {
        if (!msg.contains("fault") || !msg["fault"].is_string()
                || !msg.contains("pressed") || !msg["pressed"].is_boolean())
            throw bridge_error(bridge_errc::bad_command,
                    "key needs fault:<name> and pressed:<bool>");
        auto f = registers::parse_fault(msg["fault"].get<std::string>());
        if (!f)
            throw bridge_error(bridge_errc::unknown_fault,
                    msg["fault"].get<std::string>());
        return plant::cmd::set_key{*f, msg["pressed"].get<bool>()};
    }
    if (type == "pot") {
        if (!msg.contains("target") || !msg["target"].is_string()
                || !msg.contains("value") || !msg["value"].is_number())
            throw bridge_error(bridge_errc::bad_command,
                    "pot needs target:<label> and value:<number>");
        const auto target = msg["target"].get<std::string>();
        const double value = msg["value"].get<double>();
        if (target == "ETA" || target == "eta")
            return plant::cmd::set_efficiency{value};
        auto s = plant::parse_potentiometer(target);
        if (!s)
            throw bridge_error(bridge_errc::unknown_target, target);
        return plant::cmd::set_pot{*s, value};
    }
    if (type == "clear_faults")
        return plant::cmd::clear_faults{};
    if (type == "preset") {
        if (!msg.contains("name") || !msg["name"].is_string())
            throw bridge_error(bridge_errc::bad_command, "preset needs name:<text>");
        return plant::cmd::load_preset{msg["name"].get<std::string>()};
    }
    throw bridge_error(bridge_errc::bad_command, "unknown type '" + type + "'");
}

std::string command_error_name(const std::exception& e) {
    if (auto* b = dynamic_cast<const bridge_error*>(&e))
        return to_string(b->code());
    if (auto* p = dynamic_cast<const plant::plant_error*>(&e))
        return plant::to_string(p->code());
    if (auto* a = dynamic_cast<const auth_error*>(&e))
        return to_string(a->code());
    return "InternalError";
}

} // namespace dehum::gateway
