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

#include <dehum/link/virtual_link.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace dehum::link {

namespace {

// Probability p as a threshold on a uniform 64-bit draw.
std::uint64_t threshold(double p) {
    if (p <= 0.0)
        return 0;
    const long double scaled = std::ldexp(static_cast<long double>(p), 64);
    if (scaled >= 18446744073709551615.0L)
        return UINT64_MAX;
    return static_cast<std::uint64_t>(scaled);
}

std::seed_seq make_seed(std::uint64_t seed, std::uint64_t stream) {
    return std::seed_seq{static_cast<std::uint32_t>(seed),
            static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream)};
}

} // namespace

void link_config::validate() const {
    if (!(bit_error_rate >= 0.0 && bit_error_rate < 1.0))
        throw std::invalid_argument("bit_error_rate must be in [0,1)");
    if (!(drop_rate >= 0.0 && drop_rate <= 1.0))
        throw std::invalid_argument("drop_rate must be in [0,1]");
    if (delay_ms < 0)
        throw std::invalid_argument("delay must be non-negative");
}

link_stats& link_stats::operator+=(const link_stats& o) noexcept {
    frames_sent += o.frames_sent;
    frames_dropped += o.frames_dropped;
    frames_corrupted += o.frames_corrupted;
    bits_flipped += o.bits_flipped;
    bits_delivered += o.bits_delivered;
    return *this;
}

impairment::impairment(const link_config& config, std::uint64_t stream)
    : config_(config),
      drop_threshold_(threshold(config.drop_rate)),
      flip_threshold_(threshold(config.bit_error_rate)) {
    config_.validate();
    auto seq = make_seed(config.seed, stream);
    rng_.seed(seq);
}

bool impairment::draw(std::uint64_t threshold, bool certain) {
    const auto r = rng_();
    return certain || r < threshold;
}

transmit_result impairment::transmit(std::span<const std::uint8_t> frame) {
    ++stats_.frames_sent;
    if (config_.drop_rate > 0.0 && draw(drop_threshold_, config_.drop_rate >= 1.0)) {
        ++stats_.frames_dropped;
        return dropped{};
    }
    bytes out(frame.begin(), frame.end());
    stats_.bits_delivered += 8u * out.size();
    if (config_.bit_error_rate > 0.0) {
        std::uint64_t flips = 0;
        for (auto& byte : out)
            for (int bit = 0; bit < 8; ++bit)
                if (rng_() < flip_threshold_) {
                    byte ^= static_cast<std::uint8_t>(1u << bit);
                    ++flips;
                }
        if (flips) {
            ++stats_.frames_corrupted;
            stats_.bits_flipped += flips;
        }
    }
    return delivered{std::move(out)};
}

channel::channel(const link_config& config, std::uint64_t stream)
    : impairment_(config, stream) {}

void channel::send(std::span<const std::uint8_t> frame) {
    std::lock_guard lock(mutex_);
    if (closed_)
        return;
    auto result = impairment_.transmit(frame);
    if (auto* d = std::get_if<delivered>(&result)) {
        queue_.push_back({clock::now()
                        + std::chrono::milliseconds(impairment_.config().delay_ms),
                std::move(d->data)});
        cv_.notify_all();
    }
}

std::optional<bytes> channel::receive(std::chrono::milliseconds timeout) {
    const auto deadline = clock::now() + timeout;
    std::unique_lock lock(mutex_);
    for (;;) {
        if (closed_)
            return std::nullopt;
        const auto now = clock::now();
        if (!queue_.empty() && queue_.front().due <= now) {
            auto data = std::move(queue_.front().data);
            queue_.pop_front();
            return data;
        }
        if (now >= deadline)
            return std::nullopt;
        auto wake = deadline;
        if (!queue_.empty() && queue_.front().due < wake)
            wake = queue_.front().due;
        cv_.wait_until(lock, wake);
    }
}

void channel::clear() {
    std::lock_guard lock(mutex_);
    queue_.clear();
}

void channel::close() {
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    cv_.notify_all();
}

link_stats channel::stats() const {
    std::lock_guard lock(mutex_);
    return impairment_.stats();
}

virtual_link::virtual_link(const link_config& config)
    : config_(config),
      to_slave_(config, master_to_slave_stream),
      to_master_(config, slave_to_master_stream) {}

link_stats virtual_link::stats() const {
    auto total = to_slave_.stats();
    total += to_master_.stats();
    return total;
}

void virtual_link::close() {
    to_slave_.close();
    to_master_.close();
}

} // namespace dehum::link
