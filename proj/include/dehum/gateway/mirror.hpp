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

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <dehum/registers/alarms.hpp>
#include <dehum/registers/register_map.hpp>

namespace dehum::gateway {

/// The gateway's copy of the PLC registers. Every field comes from the same
/// completed poll cycle.
struct mirror_snapshot {
    std::array<std::uint16_t, registers::register_count> registers{};
    std::int64_t poll_started_ms{};   // when the successful request went out
    std::int64_t last_update_ms{};    // when its reply was accepted
    std::uint64_t sequence{};         // successful cycles so far
    std::uint64_t poll_failures_since_update{};

    std::uint16_t at(std::uint16_t address) const {
        return registers.at(address - registers::base_address);
    }
    registers::engineering_value engineering(std::uint16_t address) const;
    std::uint16_t alarm_word() const { return at(registers::alarms_address); }
    /// Faults named by the defined alarm bits; reserved bits are ignored.
    registers::fault_set alarms() const;
    registers::run_status status() const;

    std::int64_t staleness_ms(std::int64_t now_ms) const {
        return now_ms - last_update_ms;
    }
};

/// Whole-snapshot publication. Readers get an immutable snapshot and never
/// wait on the serial link; the lock only guards a pointer copy.
class register_mirror {
public:
    std::shared_ptr<const mirror_snapshot> load() const;

    void publish(mirror_snapshot snapshot);
    /// Republishes the current snapshot with its failure counter bumped.
    /// Register data and timestamps stay as they were.
    void record_failure();

    std::uint64_t version() const;
    /// Blocks until the version differs from `seen` or the timeout passes.
    /// Returns the current version.
    std::uint64_t wait_for_change(std::uint64_t seen,
            std::chrono::milliseconds timeout) const;
    /// Wakes every waiter (used on shutdown).
    void notify_all() const;

private:
    mutable std::mutex mutex_;
    mutable std::condition_variable cv_;
    std::shared_ptr<const mirror_snapshot> current_;
    std::uint64_t version_{0};
};

struct pending_write {
    std::uint16_t start{};
    std::vector<std::uint16_t> values;
};

/// Bounded multi-producer queue of TCP writes waiting for the next poll
/// cycle to forward them to the slave.
class write_queue {
public:
    static constexpr std::size_t default_depth{16};

    explicit write_queue(std::size_t depth = default_depth) : depth_(depth) {}

    /// False when full.
    bool try_push(pending_write w);
    std::optional<pending_write> front() const;
    void pop();
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::vector<pending_write> items_;
    std::size_t depth_;
};

} // namespace dehum::gateway
