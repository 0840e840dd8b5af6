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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string_view>
#include <thread>

#include <dehum/clock.hpp>
#include <dehum/gateway/mirror.hpp>
#include <dehum/link/transport.hpp>

namespace dehum::gateway {

struct poll_config {
    std::int64_t poll_period_ms{500};
    std::int64_t response_timeout_ms{200};
    int max_retries{2};
    std::uint8_t unit_id{1};

    /// Throws std::invalid_argument; response_timeout must be shorter than
    /// the poll period.
    void validate() const;
};

enum class poll_failure { timeout, crc_mismatch, exception_response, invalid_response };

std::string_view to_string(poll_failure f) noexcept;

struct poll_result {
    bool updated{false};
    std::optional<poll_failure> cause;
    int attempts{0};
};

struct poll_stats {
    std::uint64_t cycles{0};
    std::uint64_t updates{0};
    std::uint64_t failed_cycles{0};
    std::uint64_t timeouts{0};
    std::uint64_t crc_errors{0};
    std::uint64_t exceptions{0};
    std::uint64_t invalid_responses{0};
    std::uint64_t writes_forwarded{0};
    std::uint64_t writes_rejected{0};
};

/// RTU master: each cycle forwards queued TCP writes, then reads
/// 4000..4011 and replaces the mirror snapshot on a clean reply.
class poller {
public:
    poller(poll_config config, link::rtu_transport& transport,
            register_mirror& mirror, write_queue& writes, clock_fn clock = steady_ms);
    ~poller();

    poll_result poll_cycle();

    /// Runs poll_cycle once per poll period on a background thread.
    void start();
    void stop();

    poll_stats stats() const;
    const poll_config& config() const noexcept { return config_; }

private:
    struct attempt_outcome {
        std::optional<modbus::pdu> response;
        std::optional<poll_failure> failure;
    };

    attempt_outcome attempt(const modbus::pdu& request, std::int64_t& sent_at);
    void forward_writes();

    poll_config config_;
    link::rtu_transport& transport_;
    register_mirror& mirror_;
    write_queue& writes_;
    clock_fn clock_;
    std::uint64_t sequence_{0};

    mutable std::mutex stats_mutex_;
    poll_stats stats_;

    std::atomic<bool> running_{false};
    std::thread worker_;
};

} // namespace dehum::gateway
