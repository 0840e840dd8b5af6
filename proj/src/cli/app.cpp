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

#include <dehum/cli/app.hpp>

#include <csignal>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <dehum/cli/bridge_client.hpp>
#include <dehum/cli/modbus_client.hpp>
#include <dehum/cli/runtime.hpp>
#include <dehum/gateway/monitor.hpp>
#include <dehum/modbus/error.hpp>
#include <dehum/plant/presets.hpp>
#include <dehum/registers/alarms.hpp>
#include <dehum/registers/register_map.hpp>

namespace dehum::cli {

using nlohmann::json;
using namespace std::chrono_literals;

namespace {

// Failures that map to exit 1 and exit 2 respectively.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct remote_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct common_options {
    std::optional<std::string> config_path;
    bool json_output{false};
};

bench_config load_effective_config(const common_options& common) {
    std::optional<std::filesystem::path> explicit_path;
    if (common.config_path)
        explicit_path = *common.config_path;
    if (auto path = resolve_config_path(explicit_path))
        return load_config(*path);
    return bench_config{};
}

std::string hex_word(std::uint16_t v) {
    std::ostringstream s;
    s << "0x" << std::uppercase << std::hex << std::setw(4) << std::setfill('0') << v;
    return s.str();
}

// "MB_4003 ST1 54.50 °C", "MB_4010 ALARMS 0x0000", "MB_4011 STATUS RUNNING".
std::string format_register(std::uint16_t address, std::uint16_t raw) {
    const auto& e = registers::register_map::instance().lookup(address);
    std::string line = std::string(e.code) + " " + std::string(e.plc_label) + " ";
    if (address == registers::alarms_address) {
        line += hex_word(raw);
        const auto faults = registers::fault_set::from_bits(raw & 0x3F);
        for (const auto& name : faults.names())
            line += " " + std::string(name);
    } else if (address == registers::status_address) {
        line += raw <= 1 ? std::string(to_string(static_cast<registers::run_status>(raw)))
                         : std::to_string(raw);
    } else {
        line += registers::format_value(raw, e);
        if (auto sym = registers::unit_symbol(e.unit); !sym.empty())
            line += " " + std::string(sym);
    }
    return line;
}

json register_json(std::uint16_t address, std::uint16_t raw) {
    const auto& e = registers::register_map::instance().lookup(address);
    json j{{"address", address}, {"code", e.code}, {"label", e.plc_label}, {"raw", raw}};
    if (address == registers::alarms_address) {
        j["alarms"] = registers::fault_set::from_bits(raw & 0x3F).names();
    } else if (address == registers::status_address) {
        j["status"] = raw <= 1
                ? std::string(to_string(static_cast<registers::run_status>(raw)))
                : std::to_string(raw);
    } else {
        j["value"] = registers::from_register(raw, e).magnitude;
        j["unit"] = registers::unit_symbol(e.unit);
    }
    return j;
}

void print_registers(std::ostream& out, std::uint16_t start,
        const std::vector<std::uint16_t>& values, bool as_json) {
    if (as_json) {
        json arr = json::array();
        for (std::size_t i = 0; i < values.size(); ++i)
            arr.push_back(register_json(static_cast<std::uint16_t>(start + i), values[i]));
        out << json{{"registers", arr}}.dump() << "\n";
        return;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto address = static_cast<std::uint16_t>(start + i);
        if (registers::in_map(address))
            out << format_register(address, values[i]) << "\n";
        else
            out << address << " " << values[i] << "\n";
    }
}

[[noreturn]] void raise_exception(modbus::exception_code code) {
    throw remote_error("exception: " + std::string(modbus::to_string(code)));
}

net::endpoint modbus_endpoint(const bench_config& cfg, const std::optional<std::string>& host,
        std::optional<std::uint16_t> port) {
    net::endpoint ep = cfg.modbus_listen;
    if (ep.host == "0.0.0.0")
        ep.host = "127.0.0.1";
    if (host)
        ep.host = *host;
    if (port)
        ep.port = *port;
    return ep;
}

// ---- bench actions over the monitoring bridge ----

struct bridge_options {
    std::optional<std::string> bridge;
    std::optional<std::string> user;
    std::optional<std::string> password;
};

struct bridge_session {
    std::unique_ptr<bridge_stream> stream;
};

bridge_session attach(const bench_config& cfg, const bridge_options& o) {
    auto ep = o.bridge ? net::endpoint::parse(*o.bridge, cfg.bridge_listen)
                       : cfg.bridge_listen;
    if (ep.host == "0.0.0.0")
        ep.host = "127.0.0.1";
    const auto user = o.user.value_or(cfg.client_user);
    const auto password = o.password.value_or(cfg.client_password);
    if (user.empty())
        throw usage_error("no bridge credentials: set [client] in the config or pass --user");
    auto session_id = bridge_login(ep, user, password);
    return {std::make_unique<bridge_stream>(ep, session_id)};
}

json next_of_type(bridge_stream& s, std::string_view type,
        std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                deadline - std::chrono::steady_clock::now());
        auto msg = s.next(std::max(left, 0ms));
        if (!msg)
            throw remote_error("timed out waiting for " + std::string(type));
        const auto t = msg->value("type", "");
        if (t == "error") {
            const auto name = msg->value("error", "Error");
            const auto detail = msg->value("detail", "");
            throw remote_error(detail.starts_with(name) ? detail : name + ": " + detail);
        }
        if (t == type)
            return *msg;
    }
}

void print_snapshot(std::ostream& out, const json& snap, bool as_json) {
    if (as_json) {
        out << snap.dump() << "\n";
        return;
    }
    if (!snap.value("available", false)) {
        out << "snapshot unavailable\n";
        return;
    }
    const auto values = snap.at("registers").get<std::vector<std::uint16_t>>();
    print_registers(out, registers::base_address, values, false);
    out << "staleness_ms " << snap.value("staleness_ms", 0) << "\n";
}

int bench_action(const bench_config& cfg, const bridge_options& o, const json& command,
        std::ostream& out, bool as_json) {
    auto session = attach(cfg, o);
    auto& s = *session.stream;
    s.send(command);
    const auto ack = next_of_type(s, "ack", 10s);
    const auto applied = ack.at("applied_ms").get<std::int64_t>();
    // The first snapshot whose poll started after the command took effect.
    for (;;) {
        auto snap = next_of_type(s, "snapshot", 10s);
        if (snap.value("available", false)
                && snap.value("poll_started_ms", std::int64_t{0}) > applied) {
            if (as_json)
                out << json{{"ack", ack}, {"snapshot", snap}}.dump() << "\n";
            else
                print_snapshot(out, snap, false);
            return exit_ok;
        }
    }
}

// ---- long-running modes ----

sigset_t termination_signals() {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    return set;
}

void wait_for_termination() {
    auto set = termination_signals();
    int sig = 0;
    sigwait(&set, &sig);
}

void print_final_stats(std::ostream& out, const gateway_stack& gw, bool as_json) {
    const auto link = gateway::link_stats_json(gw.link_stats());
    const auto poll = gateway::poll_stats_json(gw.poll_stats());
    if (as_json) {
        out << json{{"link_stats", link}, {"poll_stats", poll}}.dump() << "\n";
        return;
    }
    out << "final stats\n";
    for (auto& [k, v] : link.items())
        out << "  link." << k << " " << v.dump() << "\n";
    for (auto& [k, v] : poll.items())
        out << "  poll." << k << " " << v.dump() << "\n";
}

// "<Name>: <detail>" without repeating a name the message already carries.
std::string named(std::string_view name, const std::exception& e) {
    std::string_view what(e.what());
    return what.starts_with(name) ? std::string(what) : std::string(name) + ": " + std::string(what);
}

void announce(std::ostream& out, std::string_view what, const net::endpoint& ep,
        std::uint16_t port) {
    out << what << " listening on " << ep.host << ":" << port << std::endl;
}

} // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dehumidifier bench: PLC simulator, impaired RS485 link, Modbus TCP gateway"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    common_options common;
    app.add_option("--config", common.config_path,
            "Config file (default: $DEHUM_CONFIG)");
    app.add_flag("--json", common.json_output, "Machine-readable output");

    std::string preset = "fig4a";
    std::optional<double> speed;
    std::optional<std::uint16_t> modbus_port_override;
    std::optional<std::uint16_t> bridge_port_override;
    auto add_runtime_flags = [&](CLI::App* sub, bool plant, bool gw) {
        if (plant) {
            sub->add_option("--preset", preset, "Start-up scenario preset");
            sub->add_option("--speed", speed, "Simulated seconds per wall second");
        }
        if (gw) {
            sub->add_option("--modbus-port", modbus_port_override, "Override [modbus] listen port");
            sub->add_option("--bridge-port", bridge_port_override, "Override [bridge] listen port");
        }
    };
    auto* bench = app.add_subcommand("bench", "Run plant, link and gateway in one process");
    add_runtime_flags(bench, true, true);
    auto* sim = app.add_subcommand("sim", "Run the plant simulator behind the serial tunnel");
    add_runtime_flags(sim, true, false);
    auto* gw = app.add_subcommand("gateway", "Run the gateway against a separate sim");
    add_runtime_flags(gw, false, true);

    std::optional<std::string> host;
    std::optional<std::uint16_t> port;
    int unit_id = 1;
    auto add_client_flags = [&](CLI::App* sub) {
        sub->add_option("--host", host, "Modbus TCP host");
        sub->add_option("--port", port, "Modbus TCP port");
        sub->add_option("--unit", unit_id, "Unit id")->check(CLI::Range(0, 255));
    };
    std::uint16_t address = 0;
    std::uint16_t quantity = 1;
    auto* read = app.add_subcommand("read", "Read holding registers over Modbus TCP");
    read->add_option("address", address, "First register address")->required();
    read->add_option("quantity", quantity, "Register count")->check(CLI::Range(1, 125));
    add_client_flags(read);

    std::vector<std::uint16_t> write_values;
    auto* write = app.add_subcommand("write", "Write holding registers over Modbus TCP");
    write->add_option("address", address, "First register address")->required();
    write->add_option("values", write_values, "Raw register values")->required();
    add_client_flags(write);

    bridge_options bopts;
    auto add_bridge_flags = [&](CLI::App* sub) {
        sub->add_option("--bridge", bopts.bridge, "Monitoring bridge host:port");
        sub->add_option("--user", bopts.user, "Bridge user");
        sub->add_option("--password", bopts.password, "Bridge password");
    };
    std::string fault_name;
    bool press = false, release = false, clear = false;
    auto* fault = app.add_subcommand("fault", "Press or release a fault key, or clear faults");
    fault->add_option("name", fault_name, "Fault key");
    auto* press_opt = fault->add_flag("--press", press, "Hold the key");
    auto* release_opt = fault->add_flag("--release", release, "Release the key");
    fault->add_flag("--clear", clear, "Clear latched faults")
            ->excludes(press_opt)->excludes(release_opt);
    press_opt->excludes(release_opt);
    add_bridge_flags(fault);

    std::string pot_label;
    double pot_value = 0.0;
    auto* pot = app.add_subcommand("pot", "Turn a potentiometer (or ETA for dryer efficiency)");
    pot->add_option("label", pot_label, "Sensor label")->required();
    pot->add_option("value", pot_value, "Set point in engineering units")->required();
    add_bridge_flags(pot);

    std::string preset_name;
    auto* preset_cmd = app.add_subcommand("preset", "Load a scenario preset");
    preset_cmd->add_option("name", preset_name, "Preset name")->required();
    add_bridge_flags(preset_cmd);

    auto* stats = app.add_subcommand("stats", "Print link and poll statistics");
    add_bridge_flags(stats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    const bool as_json = common.json_output;
    try {
        auto cfg = load_effective_config(common);
        if (speed) {
            if (!(*speed > 0.0) || *speed > 1000.0)
                throw usage_error("--speed must be in (0, 1000]");
            cfg.speed = *speed;
        }
        if (modbus_port_override)
            cfg.modbus_listen.port = *modbus_port_override;
        if (bridge_port_override)
            cfg.bridge_listen.port = *bridge_port_override;

        if (*bench || *sim || *gw) {
            // Block termination signals before any thread starts so that
            // sigwait below is their only consumer.
            auto set = termination_signals();
            pthread_sigmask(SIG_BLOCK, &set, nullptr);
        }

        if (*bench) {
            bench_runtime rt(cfg, preset);
            rt.start();
            announce(out, "modbus", cfg.modbus_listen, rt.gateway().modbus_port());
            announce(out, "bridge", cfg.bridge_listen, rt.gateway().bridge_port());
            out << "preset " << preset << std::endl;
            wait_for_termination();
            rt.stop();
            print_final_stats(out, rt.gateway(), as_json);
            return exit_ok;
        }
        if (*sim) {
            auto driver = make_driver(cfg, preset);
            link::tunnel_server tunnel(cfg.tunnel, [&](std::span<const std::uint8_t> f) {
                return driver->submit_rtu(modbus::bytes(f.begin(), f.end())).get();
            });
            driver->start();
            tunnel.start();
            announce(out, "tunnel", cfg.tunnel, tunnel.port());
            wait_for_termination();
            tunnel.stop();
            driver->stop();
            return exit_ok;
        }
        if (*gw) {
            link::tunnel_transport transport(cfg.tunnel, cfg.link);
            gateway_stack stack(cfg, transport, {});
            stack.start();
            announce(out, "modbus", cfg.modbus_listen, stack.modbus_port());
            announce(out, "bridge", cfg.bridge_listen, stack.bridge_port());
            wait_for_termination();
            stack.stop();
            print_final_stats(out, stack, as_json);
            return exit_ok;
        }

        if (*read || *write) {
            modbus_tcp_client client(modbus_endpoint(cfg, host, port),
                    static_cast<std::uint8_t>(unit_id));
            if (*read) {
                auto r = client.read_holding(address, quantity);
                if (auto* ex = std::get_if<modbus::exception_code>(&r))
                    raise_exception(*ex);
                print_registers(out, address, std::get<0>(r), as_json);
                return exit_ok;
            }
            if (write_values.size() == 1) {
                auto r = client.write_single(address, write_values[0]);
                if (auto* ex = std::get_if<modbus::exception_code>(&r))
                    raise_exception(*ex);
            } else {
                auto r = client.write_multiple(address, write_values);
                if (auto* ex = std::get_if<modbus::exception_code>(&r))
                    raise_exception(*ex);
            }
            if (as_json)
                out << json{{"written", write_values.size()}, {"address", address}}.dump() << "\n";
            else
                out << "wrote " << write_values.size() << " register(s) at " << address << "\n";
            return exit_ok;
        }

        if (*fault) {
            json cmd;
            if (clear) {
                cmd = {{"type", "clear_faults"}};
            } else {
                if (fault_name.empty() || !(press || release))
                    throw usage_error("fault: give a key name with --press or --release, or --clear");
                if (!registers::parse_fault(fault_name))
                    throw usage_error("UnknownFault: " + fault_name);
                cmd = {{"type", "key"}, {"fault", fault_name}, {"pressed", press}};
            }
            return bench_action(cfg, bopts, cmd, out, as_json);
        }
        if (*pot) {
            if (!plant::parse_potentiometer(pot_label)
                    && CLI::detail::to_lower(pot_label) != "eta")
                throw usage_error("UnknownTarget: " + pot_label);
            return bench_action(cfg, bopts,
                    {{"type", "pot"}, {"target", pot_label}, {"value", pot_value}}, out, as_json);
        }
        if (*preset_cmd)
            return bench_action(cfg, bopts, {{"type", "preset"}, {"name", preset_name}}, out,
                    as_json);
        if (*stats) {
            auto session = attach(cfg, bopts);
            auto snap = next_of_type(*session.stream, "snapshot", 5s);
            if (as_json) {
                out << json{{"link_stats", snap["link_stats"]},
                        {"poll_stats", snap["poll_stats"]}}.dump() << "\n";
            } else {
                for (auto& [k, v] : snap["link_stats"].items())
                    out << "link." << k << " " << v.dump() << "\n";
                for (auto& [k, v] : snap["poll_stats"].items())
                    out << "poll." << k << " " << v.dump() << "\n";
                out << "staleness_ms " << snap.value("staleness_ms", 0) << "\n";
            }
            return exit_ok;
        }
    } catch (const config_error& e) {
        err << "ConfigInvalid: " << e.what() << "\n";
        return exit_usage;
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const plant::plant_error& e) {
        // Preset lookup at start-up.
        err << named(plant::to_string(e.code()), e) << "\n";
        return exit_usage;
    } catch (const remote_error& e) {
        (std::string_view(e.what()).starts_with("exception: ") ? out : err) << e.what() << "\n";
        return exit_remote;
    } catch (const gateway::auth_error& e) {
        err << named(gateway::to_string(e.code()), e) << "\n";
        return exit_remote;
    } catch (const net::net_error& e) {
        err << named(net::to_string(e.code()), e) << "\n";
        return e.code() == net::net_errc::port_in_use ? exit_usage : exit_remote;
    } catch (const modbus::codec_error& e) {
        err << "protocol error: " << e.what() << "\n";
        return exit_remote;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_remote;
    }
    return exit_usage;
}

} // namespace dehum::cli
