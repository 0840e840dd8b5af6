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
#include <cstdint>
#include <functional>

namespace dehum {

/// Milliseconds on the process-wide monotonic clock. Every component in one
/// bench process stamps events on this scale so they can be compared.
inline std::int64_t steady_ms() noexcept {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch())
            .count();
}

using clock_fn = std::function<std::int64_t()>;

/// Manually advanced clock for accelerated (non-wall-clock) runs.
class virtual_clock {
public:
    std::int64_t now() const noexcept { return now_ms_; }
    void advance(std::int64_t ms) noexcept { now_ms_ += ms; }
    void set(std::int64_t ms) noexcept { now_ms_ = ms; }

    clock_fn fn() {
        return [this] { return now_ms_; };
    }

private:
    std::int64_t now_ms_{0};
};

} // namespace dehum
