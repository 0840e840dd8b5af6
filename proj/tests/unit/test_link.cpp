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

#include <bit>
#include <cmath>
#include <thread>

#include <dehum/link/transport.hpp>
#include <dehum/link/virtual_link.hpp>

using namespace dehum;
using namespace dehum::link;
using namespace std::chrono_literals;

namespace {

bytes pattern(std::size_t n, std::uint8_t seed = 0) {
    bytes b(n);
    for (std::size_t i = 0; i < n; ++i)
        b[i] = static_cast<std::uint8_t>(seed + i * 37);
    return b;
}

double sigma(double n, double p) {
    return std::sqrt(n * p * (1.0 - p));
}

} // namespace

TEST_CASE("identity channel delivers frames untouched") {
    impairment imp(link_config{}, 0);
    const auto frame = pattern(64);
    for (int i = 0; i < 100; ++i) {
        auto r = imp.transmit(frame);
        REQUIRE(std::holds_alternative<delivered>(r));
        REQUIRE(std::get<delivered>(r).data == frame);
    }
    CHECK(imp.stats().frames_sent == 100);
    CHECK(imp.stats().frames_dropped == 0);
    CHECK(imp.stats().bits_flipped == 0);
    CHECK(imp.stats().bits_delivered == 100u * 64 * 8);
}

TEST_CASE("drop rate 1 drops everything") {
    impairment imp(link_config{0.0, 1.0, 0, 3}, 0);
    for (int i = 0; i < 50; ++i)
        REQUIRE(std::holds_alternative<dropped>(imp.transmit(pattern(8))));
    CHECK(imp.stats().frames_dropped == 50);
    CHECK(imp.stats().bits_delivered == 0);
}

TEST_CASE("bit flips follow the binomial expectation") {
    const double p = 1e-3;
    impairment imp(link_config{p, 0.0, 0, 42}, 0);
    const auto frame = pattern(125);  // 1000 bits
    std::uint64_t observed_flips = 0;
    for (int i = 0; i < 1000; ++i) {
        auto r = imp.transmit(frame);
        const auto& out = std::get<delivered>(r).data;
        for (std::size_t k = 0; k < out.size(); ++k)
            observed_flips += std::popcount(static_cast<unsigned>(out[k] ^ frame[k]));
    }
    const auto& st = imp.stats();
    REQUIRE(st.bits_delivered == 1'000'000);
    CHECK(st.bits_flipped == observed_flips);
    const double n = static_cast<double>(st.bits_delivered);
    CHECK(std::abs(static_cast<double>(st.bits_flipped) - n * p) <= 5.0 * sigma(n, p));
    CHECK(st.frames_corrupted > 0);
    CHECK(st.frames_corrupted <= st.frames_sent);
}

TEST_CASE("frame drops follow the binomial expectation") {
    const double p = 0.05;
    impairment imp(link_config{0.0, p, 0, 9}, 1);
    const int n = 20000;
    for (int i = 0; i < n; ++i)
        imp.transmit(pattern(8));
    CHECK(std::abs(static_cast<double>(imp.stats().frames_dropped) - n * p)
            <= 5.0 * sigma(n, p));
}

TEST_CASE("impairment is deterministic per seed and stream") {
    const link_config cfg{0.01, 0.1, 0, 1234};
    impairment a(cfg, 0), b(cfg, 0), other_stream(cfg, 1);
    bool streams_differ = false;
    for (int i = 0; i < 200; ++i) {
        const auto f = pattern(20, static_cast<std::uint8_t>(i));
        auto ra = a.transmit(f);
        auto rb = b.transmit(f);
        auto rc = other_stream.transmit(f);
        REQUIRE(ra.index() == rb.index());
        if (auto* da = std::get_if<delivered>(&ra))
            REQUIRE(da->data == std::get<delivered>(rb).data);
        if (ra.index() != rc.index()
                || (ra.index() == 0 && std::get<0>(ra).data != std::get<0>(rc).data))
            streams_differ = true;
    }
    CHECK(a.stats() == b.stats());
    CHECK(streams_differ);
}

TEST_CASE("link config validation") {
    CHECK_THROWS_AS((link_config{-0.1, 0, 0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((link_config{1.0, 0, 0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((link_config{0, 1.5, 0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((link_config{0, 0, -1, 1}.validate()), std::invalid_argument);
    CHECK_NOTHROW((link_config{0.5, 1.0, 10, 1}.validate()));
}

TEST_CASE("channel honours delay and order") {
    channel ch(link_config{0.0, 0.0, 60, 1}, 0);
    ch.send(pattern(4, 1));
    ch.send(pattern(4, 2));
    CHECK_FALSE(ch.receive(10ms));
    auto first = ch.receive(500ms);
    REQUIRE(first);
    CHECK(*first == pattern(4, 1));
    auto second = ch.receive(500ms);
    REQUIRE(second);
    CHECK(*second == pattern(4, 2));

    ch.send(pattern(4, 3));
    ch.clear();
    CHECK_FALSE(ch.receive(100ms));
    ch.close();
    CHECK_FALSE(ch.receive(100ms));
}

TEST_CASE("master and slave exchange over the virtual link") {
    virtual_link link(link_config{0.0, 0.0, 1, 5});
    slave_endpoint slave(link, [](std::span<const std::uint8_t> f) -> std::optional<bytes> {
        bytes reply(f.rbegin(), f.rend());
        return reply;
    });
    slave.start();
    link_master_transport master(link);
    auto reply = master.exchange(pattern(6), 500ms);
    REQUIRE(reply);
    const auto req = pattern(6);
    CHECK(*reply == bytes(req.rbegin(), req.rend()));
    CHECK(master.stats().frames_sent == 2);
    slave.stop();
}

TEST_CASE("simulated transport advances the virtual clock") {
    virtual_clock clock;
    auto echo = [](std::span<const std::uint8_t> f) -> std::optional<bytes> {
        return bytes(f.begin(), f.end());
    };
    simulated_transport ok(link_config{0.0, 0.0, 7, 1}, echo, clock);
    auto r = ok.exchange(pattern(5), 200ms);
    REQUIRE(r);
    CHECK(clock.now() == 14);

    simulated_transport lossy(link_config{0.0, 1.0, 7, 1}, echo, clock);
    CHECK_FALSE(lossy.exchange(pattern(5), 200ms));
    CHECK(clock.now() == 214);

    simulated_transport silent(link_config{}, [](auto) { return std::optional<bytes>{}; }, clock);
    CHECK_FALSE(silent.exchange(pattern(5), 50ms));
    CHECK(clock.now() == 264);
}

TEST_CASE("serial tunnel carries frames between processes") {
    tunnel_server server({"127.0.0.1", 0}, [](std::span<const std::uint8_t> f) -> std::optional<bytes> {
        if (f.size() == 1)
            return std::nullopt;  // stays silent
        bytes out(f.begin(), f.end());
        out.push_back(0xEE);
        return out;
    });
    server.start();
    tunnel_transport t({"127.0.0.1", server.port()}, link_config{});
    auto r = t.exchange(pattern(3), 500ms);
    REQUIRE(r);
    CHECK(r->size() == 4);
    CHECK(r->back() == 0xEE);
    CHECK_FALSE(t.exchange(bytes{1}, 100ms));
    auto again = t.exchange(pattern(2), 500ms);
    REQUIRE(again);
    CHECK(again->size() == 3);
    CHECK(t.stats().frames_sent == 5);
    server.stop();

    tunnel_transport nowhere({"127.0.0.1", 1}, link_config{});
    CHECK_FALSE(nowhere.exchange(pattern(2), 50ms));
}
