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

#include <dehum/gateway/mirror.hpp>

namespace dehum::gateway {

registers::engineering_value mirror_snapshot::engineering(
        std::uint16_t address) const {
    const auto& entry = registers::register_map::instance().lookup(
            static_cast<std::uint32_t>(address));
    return registers::from_register(at(address), entry);
}

registers::fault_set mirror_snapshot::alarms() const {
    return registers::unpack_alarms(
            alarm_word() & static_cast<std::uint16_t>(~registers::alarm_reserved_mask));
}

registers::run_status mirror_snapshot::status() const {
    return at(registers::status_address) == 0 ? registers::run_status::running
                                               : registers::run_status::shutdown;
}

std::shared_ptr<const mirror_snapshot> register_mirror::load() const {
    std::lock_guard lock(mutex_);
    return current_;
}

void register_mirror::publish(mirror_snapshot snapshot) {
    auto next = std::make_shared<const mirror_snapshot>(std::move(snapshot));
    {
        std::lock_guard lock(mutex_);
        current_ = std::move(next);
        ++version_;
    }
    cv_.notify_all();
}

void register_mirror::record_failure() {
    std::lock_guard lock(mutex_);
    if (!current_)
        return;
    auto next = std::make_shared<mirror_snapshot>(*current_);
    ++next->poll_failures_since_update;
    current_ = std::move(next);
}

std::uint64_t register_mirror::version() const {
    std::lock_guard lock(mutex_);
    return version_;
}

std::uint64_t register_mirror::wait_for_change(std::uint64_t seen,
        std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, timeout, [&] { return version_ != seen; });
    return version_;
}

void register_mirror::notify_all() const {
    cv_.notify_all();
}

bool write_queue::try_push(pending_write w) {
    std::lock_guard lock(mutex_);
    if (items_.size() >= depth_)
        return false;
    items_.push_back(std::move(w));
    return true;
}

std::optional<pending_write> write_queue::front() const {
    std::lock_guard lock(mutex_);
    if (items_.empty())
        return std::nullopt;
    return items_.front();
}

void write_queue::pop() {
    std::lock_guard lock(mutex_);
    if (!items_.empty())
        items_.erase(items_.begin());
}

std::size_t write_queue::size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
}

} // namespace dehum::gateway
