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

#include <fstream>
#include <random>
#include <sstream>

#include <dehum/modbus/error.hpp>
#include <dehum/modbus/framing.hpp>
#include <dehum/plant/driver.hpp>
#include <dehum/plant/plant.hpp>
#include <dehum/plant/presets.hpp>
#include <dehum/plant/slave.hpp>

#include "../support/oracles.hpp"

using namespace dehum;
using namespace dehum::plant;
using registers::fault;
using registers::fault_set;
using registers::run_status;

namespace {

plant_state run_for(plant_state s, const bench_inputs& in, double seconds) {
    const int ticks = static_cast<int>(std::lround(seconds / tick_s));
    for (int i = 0; i < ticks; ++i)
        s = step(s, in, tick_s);
    return s;
}

plant_errc plant_code(auto&& fn) {
    try {
        fn();
    } catch (const plant_error& e) {
        return e.code();
    }
    FAIL("expected plant_error");
    return plant_errc::unknown_target;
}

} // namespace

TEST_CASE("potentiometer sensors relax toward their targets") {
    auto in = bench_inputs::defaults();
    const auto start = plant_state::settled(in);
    in.set_target(sensor::st1, 54.50);
    in.set_target(sensor::su1, 51.90);

    auto one = step(start, in, tick_s);
    CHECK(one.value(sensor::st1) == doctest::Approx(oracle::relax(40.0, 54.5, tick_s, 5.0)));

    auto s = run_for(start, in, 30.0);
    CHECK(s.value(sensor::st1) == doctest::Approx(oracle::relax(40.0, 54.5, 30.0, 5.0)).epsilon(1e-12));
    CHECK(s.value(sensor::su1) == doctest::Approx(oracle::relax(40.0, 51.9, 30.0, 5.0)).epsilon(1e-12));
    CHECK(s.sim_clock == doctest::Approx(30.0));
    // 6 tau from 40.00 is not yet on the 0.01 grid; settled start-up is.
    CHECK(std::abs(s.value(sensor::st1) - 54.5) > 0.01);
    auto settled = plant_state::settled(in);
    CHECK(register_value(settled, 4003) == 5450);
    CHECK(register_value(settled, 4004) == 5190);
}

TEST_CASE("process outlet follows inlet and dryer efficiency") {
    auto in = bench_inputs::defaults();
    auto s = plant_state::settled(in);
    CHECK(s.value(sensor::st2) == doctest::Approx(40.0));
    CHECK(s.value(sensor::su2) == doctest::Approx(20.0));

    in.keys.set(fault::emergency);
    s = run_for(s, in, 60.0);
    // Shut down: no drying, outlet humidity rises to inlet humidity.
    CHECK(s.value(sensor::su2) == doctest::Approx(40.0).epsilon(1e-4));
}

TEST_CASE("step rejects non-positive dt") {
    const auto s = plant_state::settled(bench_inputs::defaults());
    CHECK_THROWS_AS(step(s, bench_inputs::defaults(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(step(s, bench_inputs::defaults(), -1.0), std::invalid_argument);
}

TEST_CASE("fault keys latch and shut the plant down") {
    auto in = bench_inputs::defaults();
    auto s = plant_state::settled(in);
    in.keys.set(fault::emergency);
    s = step(s, in, tick_s);
    CHECK(s.faults.test(fault::emergency));
    CHECK(s.status == run_status::shutdown);
    CHECK(register_value(s, 4010) == 0x0001);
    CHECK(register_value(s, 4011) == 1);

    CHECK(plant_code([&] { clear_faults(s, in); }) == plant_errc::keys_still_active);

    in.keys.set(fault::emergency, false);
    s = step(s, in, tick_s);
    CHECK(s.faults.test(fault::emergency));  // still latched

    s = clear_faults(s, in);
    CHECK(s.faults.none());
    CHECK(s.status == run_status::running);
}

TEST_CASE("airflow fault latches only while running") {
    auto in = bench_inputs::defaults();
    auto running = plant_state::settled(in);
    in.keys.set(fault::diff_pressure);
    auto s = step(running, in, tick_s);
    CHECK(s.faults == fault_set{fault::diff_pressure});
    CHECK(s.status == run_status::shutdown);

    // Already shut down by another fault: the fan is off, no airflow fault.
    auto in2 = bench_inputs::defaults();
    in2.keys.set(fault::emergency);
    auto down = step(plant_state::settled(in2), in2, tick_s);
    REQUIRE(down.status == run_status::shutdown);
    in2.keys.set(fault::diff_pressure);
    down = run_for(down, in2, 2.0);
    CHECK_FALSE(down.faults.test(fault::diff_pressure));
    CHECK(registers::pack_alarms(down.faults) == 0x0001);
}

TEST_CASE("plant invariants hold over random key sequences") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> temp(-20.0, 120.0);
    std::uniform_real_distribution<double> rh(0.0, 100.0);
    for (int run = 0; run < 50; ++run) {
        auto in = bench_inputs::defaults();
        auto s = plant_state::settled(in);
        for (int i = 0; i < 400; ++i) {
            const auto roll = rng() % 20;
            if (roll < 3) {
                in.keys.set(registers::all_faults[rng() % 6], rng() % 2);
            } else if (roll == 3) {
                in.set_target(sensor::st1, temp(rng));
            } else if (roll == 4) {
                in.set_target(sensor::su1, rh(rng));
            } else if (roll == 5 && in.keys.none()) {
                s = clear_faults(s, in);
            }
            const auto before = s;
            s = step(s, in, tick_s);

            REQUIRE((s.status == run_status::shutdown) == s.faults.any());
            // Latched faults never disappear without a clear.
            REQUIRE((before.faults.bits() & ~s.faults.bits()) == 0);
            // Held keys other than the airflow one always latch.
            for (auto f : registers::all_faults)
                if (f != fault::diff_pressure && in.keys.test(f))
                    REQUIRE(s.faults.test(f));
            for (auto h : {sensor::su1, sensor::su2}) {
                REQUIRE(s.value(h) >= 0.0);
                REQUIRE(s.value(h) <= 100.0);
            }
            // Relaxation never overshoots.
            const double lo = std::min(before.value(sensor::st1), in.target(sensor::st1));
            const double hi = std::max(before.value(sensor::st1), in.target(sensor::st1));
            REQUIRE(s.value(sensor::st1) >= lo - 1e-9);
            REQUIRE(s.value(sensor::st1) <= hi + 1e-9);
        }
    }
}

TEST_CASE("register view matches the scaling oracle") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> any(-400.0, 70000.0);
    const auto& map = registers::register_map::instance();
    for (int i = 0; i < 2000; ++i) {
        plant_state s;
        for (auto& v : s.sensors)
            v = any(rng);
        s.a0 = static_cast<std::uint16_t>(rng());
        s.faults = fault_set::from_bits(static_cast<std::uint8_t>(rng() & 0x3F));
        s.status = s.faults.any() ? run_status::shutdown : run_status::running;

        const auto view = register_view(s);
        REQUIRE(view[0] == s.a0);
        for (std::size_t k = 1; k <= sensor_count; ++k) {
            const auto& e = map.lookup(static_cast<std::uint32_t>(4000 + k));
            const double lo = e.is_signed ? -32768.0 / e.scale : 0.0;
            const double hi = (e.is_signed ? 32767.0 : 65535.0) / e.scale;
            const double v = std::clamp(s.sensors[k - 1], lo, hi);
            REQUIRE(view[k] == oracle::encode_scaled(v, e.scale, e.is_signed));
        }
        std::uint16_t alarms = 0;
        for (const auto& row : oracle::alarm_table)
            if (s.faults.test(*registers::parse_fault(row.name)))
                alarms |= row.mask;
        REQUIRE(view[10] == alarms);
        REQUIRE(view[11] == (alarms ? 1 : 0));
    }
}

TEST_CASE("slave answers from the register view") {
    const auto s = plant_state::settled(bench_inputs::defaults());
    auto read = slave_respond(s, modbus::read_holding_request{4000, 12});
    const auto view = register_view(s);
    CHECK(read.response == modbus::pdu{modbus::read_holding_response{{view.begin(), view.end()}}});
    CHECK_FALSE(read.new_a0);

    auto outside = [&](modbus::pdu req, std::uint8_t fc) {
        return slave_respond(s, req).response
                == modbus::pdu{modbus::exception_response{fc,
                        modbus::exception_code::illegal_data_address}};
    };
    CHECK(outside(modbus::read_holding_request{5000, 1}, 0x03));
    CHECK(outside(modbus::read_holding_request{3999, 2}, 0x03));
    CHECK(outside(modbus::read_holding_request{4010, 3}, 0x03));
    CHECK(outside(modbus::write_single_request{4003, 1}, 0x06));
    CHECK(outside(modbus::write_multiple_request{4000, {1, 2}}, 0x10));

    auto w = slave_respond(s, modbus::write_single_request{4000, 77});
    CHECK(w.response == modbus::pdu{modbus::write_single_response{4000, 77}});
    CHECK(w.new_a0 == 77);
    auto wm = slave_respond(s, modbus::write_multiple_request{4000, {9}});
    CHECK(wm.response == modbus::pdu{modbus::write_multiple_response{4000, 1}});
    CHECK(wm.new_a0 == 9);
}

TEST_CASE("rtu slave frame handling") {
    auto s = plant_state::settled(bench_inputs::defaults());
    const rtu_slave slave(1);

    auto req = modbus::encode_rtu({1, modbus::write_single_request{4000, 5}});
    auto reply = slave.handle(s, req);
    REQUIRE(reply);
    CHECK(modbus::decode_rtu(*reply, modbus::direction::response).body
            == modbus::pdu{modbus::write_single_response{4000, 5}});
    CHECK(s.a0 == 5);

    auto corrupt = req;
    corrupt[3] ^= 0x10;
    CHECK_FALSE(slave.handle(s, corrupt));
    CHECK_FALSE(slave.handle(s, modbus::encode_rtu({2, modbus::read_holding_request{4000, 1}})));

    auto with_crc = [](modbus::bytes b) {
        const auto crc = oracle::crc16_bitwise(b);
        b.push_back(static_cast<std::uint8_t>(crc & 0xFF));
        b.push_back(static_cast<std::uint8_t>(crc >> 8));
        return b;
    };
    auto ex = slave.handle(s, with_crc({0x01, 0x04, 0x0F, 0xA0, 0x00, 0x01}));
    REQUIRE(ex);
    CHECK(*ex == with_crc({0x01, 0x84, 0x01}));
    auto bad_qty = slave.handle(s, with_crc({0x01, 0x03, 0x0F, 0xA0, 0x00, 0x00}));
    REQUIRE(bad_qty);
    CHECK(*bad_qty == with_crc({0x01, 0x83, 0x03}));
}

TEST_CASE("built-in presets") {
    const auto presets = builtin_presets();
    const auto& a = find_preset(presets, "fig4a");
    CHECK(a.inputs.keys.none());
    CHECK(a.initial_faults.none());

    const auto& b = find_preset(presets, "fig4b");
    std::uint16_t expected = 0;
    for (const char* name : {"EMERGENCY", "SAFETY_THERMOSTAT", "MOTOR_OVERLOAD",
                 "REACT_SENSOR", "POST_HEATER"})
        for (const auto& row : oracle::alarm_table)
            if (std::string_view(row.name) == name)
                expected |= row.mask;
    CHECK(registers::pack_alarms(b.initial_faults) == expected);
    CHECK(b.inputs.keys == b.initial_faults);

    const auto& c = find_preset(presets, "fig4c");
    CHECK(c.inputs.target(sensor::st1) == 54.50);
    CHECK(c.inputs.target(sensor::su1) == 51.90);

    CHECK(plant_code([&] { find_preset(presets, "fig9"); }) == plant_errc::unknown_preset);

    auto loaded = apply_preset(plant_state::settled(b.inputs), b);
    CHECK(loaded.status == run_status::shutdown);
    CHECK(register_value(loaded, 4010) == expected);
}

TEST_CASE("shipped presets.json equals the built-in set") {
    std::ifstream in(DEHUM_SOURCE_DIR "/config/presets.json");
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(parse_presets(buf.str()) == builtin_presets());
    CHECK(parse_presets(presets_to_json(builtin_presets())) == builtin_presets());
}

TEST_CASE("preset file validation") {
    auto code = [](const char* text) { return plant_code([&] { parse_presets(text); }); };
    CHECK(code("{}") == plant_errc::invalid_preset_file);
    CHECK(code("not json") == plant_errc::invalid_preset_file);
    CHECK(code(R"([{"name":"x"},{"name":"x"}])") == plant_errc::invalid_preset_file);
    CHECK(code(R"([{"name":"x","keys":["BOGUS"]}])") == plant_errc::invalid_preset_file);
    CHECK(code(R"([{"name":"x","targets":{"SU1":150}}])") == plant_errc::invalid_preset_file);
    CHECK(code(R"([{"name":"x","targets":{"ST2":20}}])") == plant_errc::invalid_preset_file);

    auto ok = parse_presets(R"([{"name":"warm","targets":{"ST1":30.25},"dry_efficiency":0.8}])");
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].inputs.target(sensor::st1) == 30.25);
    CHECK(ok[0].inputs.target(sensor::srt) == 40.0);
    CHECK(ok[0].inputs.dry_efficiency == 0.8);
}

TEST_CASE("driver applies commands between ticks") {
    virtual_clock clock;
    plant_driver::options opts;
    opts.clock = clock.fn();
    const auto in = bench_inputs::defaults();
    plant_driver driver(opts, plant_state::settled(in), in);

    auto ack = driver.submit(cmd::set_key{fault::emergency, true});
    clock.advance(123);
    driver.apply_pending();
    CHECK(ack.get().applied_ms == 123);
    // The key latches as soon as it is applied, before any tick.
    CHECK(driver.snapshot()->state.faults.test(fault::emergency));
    driver.tick();
    auto snap = driver.snapshot();
    CHECK(snap->state.status == run_status::shutdown);
    CHECK(snap->inputs.keys.test(fault::emergency));

    auto refused = driver.submit(cmd::clear_faults{});
    driver.apply_pending();
    CHECK(plant_code([&] { refused.get(); }) == plant_errc::keys_still_active);

    auto bad_pot = driver.submit(cmd::set_pot{sensor::su1, 140.0});
    auto no_pot = driver.submit(cmd::set_pot{sensor::st2, 10.0});
    auto bad_eta = driver.submit(cmd::set_efficiency{1.5});
    auto bad_preset = driver.submit(cmd::load_preset{"nope"});
    driver.apply_pending();
    CHECK(plant_code([&] { bad_pot.get(); }) == plant_errc::value_out_of_range);
    CHECK(plant_code([&] { no_pot.get(); }) == plant_errc::unknown_target);
    CHECK(plant_code([&] { bad_eta.get(); }) == plant_errc::value_out_of_range);
    CHECK(plant_code([&] { bad_preset.get(); }) == plant_errc::unknown_preset);

    auto preset = driver.submit(cmd::load_preset{"fig4a"});
    driver.apply_pending();
    preset.get();
    CHECK(driver.snapshot()->state.faults.none());
    CHECK(driver.snapshot()->state.status == run_status::running);

    auto reply = driver.submit_rtu(modbus::encode_rtu({1, modbus::read_holding_request{4011, 1}}));
    driver.apply_pending();
    auto frame = reply.get();
    REQUIRE(frame);
    CHECK(modbus::decode_rtu(*frame, modbus::direction::response).body
            == modbus::pdu{modbus::read_holding_response{{0}}});
}

TEST_CASE("driver thread ticks in real time") {
    plant_driver::options opts;
    opts.speed = 50.0;
    auto in = bench_inputs::defaults();
    plant_driver driver(opts, plant_state::settled(in), in);
    driver.start();
    driver.submit(cmd::set_pot{sensor::st1, 60.0}).get();
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    auto snap = driver.snapshot();
    driver.stop();
    // 0.4 s wall at 50x is about 20 s simulated, roughly 4 tau.
    CHECK(snap->state.sim_clock > 5.0);
    CHECK(snap->state.value(sensor::st1) > 50.0);
}
