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

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <dehum/clock.hpp>

namespace dehum::gateway {

enum class auth_errc { bad_credentials, store_unavailable, auth_required, auth_expired };

const char* to_string(auth_errc errc) noexcept;

class auth_error : public std::runtime_error {
public:
    auth_error(auth_errc errc, const std::string& detail);
    auth_errc code() const noexcept { return errc_; }

private:
    auth_errc errc_;
};

constexpr int default_pbkdf2_iterations{100000};

/// "pbkdf2-sha256$<iterations>$<salt hex>$<hash hex>" with a fresh random
/// salt.
std::string hash_password(std::string_view password,
        int iterations = default_pbkdf2_iterations);

/// Checks a password against an encoded hash in constant time. False for
/// malformed encodings.
bool verify_password(std::string_view password, std::string_view encoded);

/// Users and their salted password hashes, loaded from the config file.
class credential_store {
public:
    /// Throws std::invalid_argument if the encoding is malformed.
    void add(std::string user, std::string encoded_hash);
    bool empty() const noexcept { return users_.empty(); }
    std::size_t size() const noexcept { return users_.size(); }

    /// Same work (one PBKDF2 run) whether or not the user exists.
    bool verify(std::string_view user, std::string_view password) const;

private:
    std::map<std::string, std::string, std::less<>> users_;
};

struct session {
    std::string session_id;
    std::string user;
    std::int64_t created_at_ms{};
    std::int64_t expires_at_ms{};
};

/// Issues and checks operator sessions. Sessions are validated on every
/// message, not only at login.
class session_manager {
public:
    static constexpr std::int64_t default_ttl_ms{8LL * 3600 * 1000};

    session_manager(credential_store store, std::int64_t ttl_ms = default_ttl_ms,
            clock_fn clock = steady_ms);

    /// Throws auth_error(bad_credentials) with the same message whether the
    /// user is unknown or the password wrong; store_unavailable when no
    /// credentials are configured.
    session login(std::string_view user, std::string_view password);

    /// Throws auth_required for unknown ids, auth_expired once past TTL.
    session validate(std::string_view session_id) const;

    std::int64_t now_ms() const { return clock_(); }

private:
    credential_store store_;
    std::int64_t ttl_ms_;
    clock_fn clock_;
    mutable std::mutex mutex_;
    std::map<std::string, session, std::less<>> sessions_;
};

} // namespace dehum::gateway
