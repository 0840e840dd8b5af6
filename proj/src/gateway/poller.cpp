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

#include <dehum/gateway/poller.hpp>

#include <stdexcept>

#include <dehum/modbus/error.hpp>
#include <dehum/modbus/framing.hpp>

namespace dehum::gateway {

using namespace modbus;

void poll_config::validate() const {
    if (poll_period_ms <= 0)
        throw std::invalid_argument("poll period must be positive");
    if (response_timeout_ms <= 0 || response_timeout_ms >= poll_period_ms)
        throw std::invalid_argument(
                "response timeout must be positive and shorter than the poll period");
    if (max_retries < 0)
        throw std::invalid_argument("max_retries must be non-negative");
    if (unit_id < min_unit_id || unit_id > max_unit_id)
        throw std::invalid_argument("unit id must be in 1..247");
}

std::string_view to_string(poll_failure f) noexcept {
    switch (f) {
    case poll_failure::timeout: return "Timeout";
    case poll_failure::crc_mismatch: return "CrcMismatch";
    case poll_failure::exception_response: return "ExceptionResponse";
    case poll_failure::invalid_response: return "InvalidResponse";
    }
    return "Unknown";
}

poller::poller(poll_config config, link::rtu_transport& transport,
        register_mirror& mirror, write_queue& writes, clock_fn clock)
    : config_(config),
      transport_(transport),
      mirror_(mirror),
      writes_(writes),
      clock_(std::move(clock)) {
    config_.validate();
}

poller::~poller() {
    stop();
}

poller::attempt_outcome poller::attempt(const pdu& request, std::int64_t& sent_at) {
    const auto frame = encode_rtu({config_.unit_id, request});
    sent_at = clock_();
    auto reply = transport_.exchange(
            frame, std::chrono::milliseconds(config_.response_timeout_ms));

    std::lock_guard lock(stats_mutex_);
    if (!reply) {
        ++stats_.timeouts;
        return {{}, poll_failure::timeout};
    }
    try {
        auto rsp = decode_rtu(*reply, direction::response);
        if (rsp.unit_id != config_.unit_id) {
            ++stats_.invalid_responses;
            return {{}, poll_failure::invalid_response};
        }
        if (std::holds_alternative<exception_response>(rsp.body)) {
            ++stats_.exceptions;
            return {std::move(rsp.body), poll_failure::exception_response};
        }
        return {std::move(rsp.body), {}};
    } catch (const codec_error& e) {
        if (e.code() == codec_errc::crc_mismatch) {
            ++stats_.crc_errors;
            return {{}, poll_failure::crc_mismatch};
        }
        ++stats_.invalid_responses;
        return {{}, poll_failure::invalid_response};
    }
}

void poller::forward_writes() {
    while (auto w = writes_.front()) {
        pdu request = w->values.size() == 1
                ? pdu{write_single_request{w->start, w->values.front()}}
                : pdu{write_multiple_request{w->start, w->values}};
        bool done = false;
        for (int i = 0; i <= config_.max_retries && !done; ++i) {
            std::int64_t sent_at = 0;
            auto outcome = attempt(request, sent_at);
            if (outcome.failure == poll_failure::timeout
                    || outcome.failure == poll_failure::crc_mismatch)
                continue;
            done = true;
            std::lock_guard lock(stats_mutex_);
            if (outcome.failure)
                ++stats_.writes_rejected;
            else
                ++stats_.writes_forwarded;
        }
        if (!done)
            return;  // stays queued for the next cycle
        writes_.pop();
    }
}

poll_result poller::poll_cycle() {
    {
        std::lock_guard lock(stats_mutex_);
        ++stats_.cycles;
    }
    forward_writes();

    const pdu request = read_holding_request{registers::base_address,
            static_cast<std::uint16_t>(registers::register_count)};
    poll_result result;
    for (int i = 0; i <= config_.max_retries; ++i) {
        ++result.attempts;
        std::int64_t sent_at = 0;
        auto outcome = attempt(request, sent_at);
        if (!outcome.failure) {
            const auto* rsp = std::get_if<read_holding_response>(&*outcome.response);
            if (!rsp || rsp->values.size() != registers::register_count) {
                std::lock_guard lock(stats_mutex_);
                ++stats_.invalid_responses;
                result.cause = poll_failure::invalid_response;
                break;
            }
            mirror_snapshot snap;
            std::copy(rsp->values.begin(), rsp->values.end(), snap.registers.begin());
            snap.poll_started_ms = sent_at;
            snap.last_update_ms = clock_();
            snap.sequence = ++sequence_;
            mirror_.publish(snap);
            std::lock_guard lock(stats_mutex_);
            ++stats_.updates;
            result.updated = true;
            result.cause.reset();
            return result;
        }
        result.cause = outcome.failure;
        if (outcome.failure != poll_failure::timeout
                && outcome.failure != poll_failure::crc_mismatch)
            break;
    }
    mirror_.record_failure();
    std::lock_guard lock(stats_mutex_);
    ++stats_.failed_cycles;
    return result;
}

void poller::start() {
    if (running_.exchange(true))
        return;
    worker_ = std::thread([this] {
        using clock = std::chrono::steady_clock;
        const auto period = std::chrono::milliseconds(config_.poll_period_ms);
        auto next = clock::now();
        while (running_) {
            poll_cycle();
            next += period;
            const auto now = clock::now();
            if (next < now)
                next = now;
            // Sleep in slices so stop() is prompt.
            while (running_ && clock::now() < next)
                std::this_thread::sleep_for(std::min<clock::duration>(
                        next - clock::now(), std::chrono::milliseconds(50)));
        }
    });
}

void poller::stop() {
    running_ = false;
    if (worker_.joinable())
        worker_.join();
}

poll_stats poller::stats() const {
    std::lock_guard lock(stats_mutex_);
    return stats_;
}

} // namespace dehum::gateway
