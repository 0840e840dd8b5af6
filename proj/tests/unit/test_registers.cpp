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
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include <dehum/registers/alarms.hpp>
#include <dehum/registers/register_map.hpp>

#include "../support/oracles.hpp"

using namespace dehum::registers;

TEST_CASE("register map rows") {
    const auto& map = register_map::instance();
    REQUIRE(map.entries().size() == register_count);

    const auto& st1 = map.lookup("ST1");
    CHECK(st1.code == "MB_4003");
    CHECK(st1.address == 4003);
    CHECK(st1.description == "Process input temperature");
    CHECK(st1.unit == eng_unit::celsius);
    CHECK(st1.scale == 100);
    CHECK(st1.is_signed);
    CHECK(&map.lookup("mb_4003") == &st1);
    CHECK(&map.lookup(4003u) == &st1);

    CHECK(map.lookup("SU1").description == "Moisture Intake Process");
    CHECK(map.lookup("PST1").unit == eng_unit::pascal);
    CHECK_FALSE(map.lookup("PST1").is_signed);
    CHECK(map.lookup(4000u).writable);
    CHECK(map.lookup(4010u).plc_label == "ALARMS");
    CHECK(map.lookup(4011u).plc_label == "STATUS");

    int writable = 0;
    std::set<std::uint16_t> addresses;
    for (const auto& e : map.entries()) {
        writable += e.writable;
        addresses.insert(e.address);
    }
    CHECK(writable == 1);
    CHECK(addresses.size() == register_count);
    CHECK(*addresses.begin() == base_address);
    CHECK(*addresses.rbegin() == last_address);

    CHECK(map.find(3999u) == nullptr);
    CHECK(map.find(4012u) == nullptr);
    CHECK(map.find("nope") == nullptr);
    CHECK_THROWS_AS(map.lookup("nope"), register_error);
}

TEST_CASE("scaling examples") {
    const auto& map = register_map::instance();
    const auto& st1 = map.lookup("ST1");
    const auto& su1 = map.lookup("SU1");
    const auto& pst1 = map.lookup("PST1");

    CHECK(to_register({54.50, eng_unit::celsius}, st1) == 5450);
    CHECK(to_register({51.90, eng_unit::percent_rh}, su1) == 5190);
    CHECK(to_register({-12.34, eng_unit::celsius}, st1) == 0xFB2E);
    CHECK(from_register(0xFB2E, st1).magnitude == doctest::Approx(-12.34));
    CHECK(to_register({250, eng_unit::pascal}, pst1) == 250);
    CHECK(to_register({65535, eng_unit::pascal}, pst1) == 65535);

    CHECK(format_value(5450, st1) == "54.50");
    CHECK(format_value(5190, su1) == "51.90");
    CHECK(format_value(0xFB2E, st1) == "-12.34");
    CHECK(format_value(250, pst1) == "250");

    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const register_error& e) {
            return e.code();
        }
        return register_errc::not_found;
    };
    CHECK(code_of([&] { to_register({400.0, eng_unit::celsius}, st1); })
            == register_errc::range_overflow);
    CHECK(code_of([&] { to_register({-1.0, eng_unit::pascal}, pst1); })
            == register_errc::range_overflow);
    CHECK(code_of([&] { to_register({101325.0, eng_unit::pascal}, pst1); })
            == register_errc::range_overflow);
    CHECK(code_of([&] { to_register({20.0, eng_unit::percent_rh}, st1); })
            == register_errc::unit_mismatch);

    const auto [lo, hi] = encodable_range(st1);
    CHECK(lo == doctest::Approx(-327.68));
    CHECK(hi == doctest::Approx(327.67));
}

TEST_CASE("scaling agrees with the oracle over every register word") {
    for (const auto& e : register_map::instance().entries()) {
        if (e.address >= alarms_address)
            continue;
        for (std::uint32_t raw = 0; raw <= 0xFFFF; raw += 7) {
            const auto w = static_cast<std::uint16_t>(raw);
            const auto v = from_register(w, e);
            REQUIRE(v.magnitude == doctest::Approx(oracle::decode_scaled(w, e.scale, e.is_signed)));
            REQUIRE(to_register(v, e) == w);
        }
    }
}

TEST_CASE("random engineering values roundtrip within half a step") {
    std::mt19937_64 rng(5);
    for (const auto& e : register_map::instance().entries()) {
        if (e.address >= alarms_address)
            continue;
        const auto [lo, hi] = encodable_range(e);
        std::uniform_real_distribution<double> dist(lo, hi);
        for (int i = 0; i < 1000; ++i) {
            const double x = dist(rng);
            const auto w = to_register({x, e.unit}, e);
            REQUIRE(w == oracle::encode_scaled(x, e.scale, e.is_signed));
            REQUIRE(std::abs(from_register(w, e).magnitude - x) <= 0.5 / e.scale + 1e-9);
        }
    }
}

TEST_CASE("registers.json describes the map") {
    const auto doc = nlohmann::json::parse(registers_json());
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == register_count);
    CHECK(doc[3]["code"] == "MB_4003");
    CHECK(doc[3]["plc_label"] == "ST1");
    CHECK(doc[3]["scale"] == 100);
    CHECK(doc[9]["unit"] == "Pa");
}

TEST_CASE("fault names") {
    for (const auto& row : oracle::alarm_table) {
        auto f = parse_fault(row.name);
        REQUIRE(f);
        CHECK(fault_name(*f) == row.name);
    }
    CHECK(parse_fault("emergency") == fault::emergency);
    CHECK(parse_fault("diff-pressure") == fault::diff_pressure);
    CHECK_FALSE(parse_fault("bogus"));
}

TEST_CASE("alarm packing is a bijection against the brute-force table") {
    for (unsigned combo = 0; combo < 64; ++combo) {
        fault_set set;
        std::uint16_t expected = 0;
        for (unsigned i = 0; i < 6; ++i) {
            if (combo & (1u << i)) {
                set.set(*parse_fault(oracle::alarm_table[i].name));
                expected |= oracle::alarm_table[i].mask;
            }
        }
        REQUIRE(pack_alarms(set) == expected);
        REQUIRE(unpack_alarms(expected) == set);
        REQUIRE((pack_alarms(set) & alarm_reserved_mask) == 0);
    }
    CHECK(pack_alarms({fault::emergency, fault::motor_overload}) == 0x0005);
}

TEST_CASE("reserved alarm bits are rejected") {
    for (int bit = 6; bit < 16; ++bit) {
        const auto word = static_cast<std::uint16_t>(1u << bit);
        try {
            unpack_alarms(word);
            FAIL("accepted reserved bit " << bit);
        } catch (const register_error& e) {
            CHECK(e.code() == register_errc::reserved_bits_set);
        }
    }
}
