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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <variant>

#include <dehum/modbus/pdu.hpp>

namespace dehum::link {

using modbus::bytes;

struct link_config {
    double bit_error_rate{0.0};  // per bit, [0,1)
    double drop_rate{0.0};       // per frame, [0,1]
    std::int64_t delay_ms{0};    // one-way latency
    std::uint64_t seed{1};

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct link_stats {
    std::uint64_t frames_sent{0};
    std::uint64_t frames_dropped{0};
    std::uint64_t frames_corrupted{0};
    std::uint64_t bits_flipped{0};
    std::uint64_t bits_delivered{0};  // bits exposed to the bit-error process

    link_stats& operator+=(const link_stats& o) noexcept;
    bool operator==(const link_stats&) const = default;
};

struct delivered {
    bytes data;
};
struct dropped {};

using transmit_result = std::variant<delivered, dropped>;

/// One direction's impairment process: a Bernoulli drop per frame, then an
/// independent flip per bit. Decisions come from raw mt19937_64 output, so
/// the same seed and traffic give the same decisions on every platform.
class impairment {
public:
    impairment(const link_config& config, std::uint64_t stream);

    transmit_result transmit(std::span<const std::uint8_t> frame);

    const link_stats& stats() const noexcept { return stats_; }
    const link_config& config() const noexcept { return config_; }

private:
    bool draw(std::uint64_t threshold, bool certain);

    link_config config_;
    std::mt19937_64 rng_;
    std::uint64_t drop_threshold_;
    std::uint64_t flip_threshold_;
    link_stats stats_;
};

/// A frame queue for one direction of the serial segment. Frames become
/// receivable `delay_ms` after they were sent and leave in send order.
class channel {
public:
    channel(const link_config& config, std::uint64_t stream);

    void send(std::span<const std::uint8_t> frame);
    std::optional<bytes> receive(std::chrono::milliseconds timeout);
    void clear();
    void close();

    link_stats stats() const;

private:
    using clock = std::chrono::steady_clock;
    struct in_flight {
        clock::time_point due;
        bytes data;
    };

    mutable std::mutex mutex_;
    std::condition_variable cv_;
    impairment impairment_;
    std::deque<in_flight> queue_;
    bool closed_{false};
};

/// Full-duplex segment between the gateway (master) and the PLC (slave).
/// Both directions share the config and draw from independent streams.
class virtual_link {
public:
    explicit virtual_link(const link_config& config);

    channel& to_slave() noexcept { return to_slave_; }
    channel& to_master() noexcept { return to_master_; }
    const link_config& config() const noexcept { return config_; }

    link_stats stats() const;
    void close();

private:
    link_config config_;
    channel to_slave_;
    channel to_master_;
};

constexpr std::uint64_t master_to_slave_stream{0};
constexpr std::uint64_t slave_to_master_stream{1};

} // namespace dehum::link
