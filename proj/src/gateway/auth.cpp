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

#include <dehum/gateway/auth.hpp>

#include <charconv>
#include <vector>

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

namespace dehum::gateway {

namespace {

constexpr std::string_view scheme{"pbkdf2-sha256"};
constexpr std::size_t salt_size{16};
constexpr std::size_t hash_size{32};

std::string to_hex(const std::vector<unsigned char>& data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

bool from_hex(std::string_view hex, std::vector<unsigned char>& out) {
    if (hex.size() % 2)
        return false;
    out.clear();
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        unsigned v = 0;
        auto [p, ec] = std::from_chars(hex.data() + i, hex.data() + i + 2, v, 16);
        if (ec != std::errc{} || p != hex.data() + i + 2)
            return false;
        out.push_back(static_cast<unsigned char>(v));
    }
    return true;
}

std::vector<unsigned char> random_bytes(std::size_t n) {
    std::vector<unsigned char> buf(n);
    if (RAND_bytes(buf.data(), static_cast<int>(n)) != 1)
        throw std::runtime_error("RAND_bytes failed");
    return buf;
}

std::vector<unsigned char> pbkdf2(std::string_view password,
        const std::vector<unsigned char>& salt, int iterations) {
    std::vector<unsigned char> out(hash_size);
    if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()),
                salt.data(), static_cast<int>(salt.size()), iterations,
                EVP_sha256(), static_cast<int>(out.size()), out.data())
            != 1)
        throw std::runtime_error("PBKDF2 failed");
    return out;
}

struct parsed_hash {
    int iterations{};
    std::vector<unsigned char> salt;
    std::vector<unsigned char> hash;
};

bool parse_hash(std::string_view encoded, parsed_hash& out) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    for (;;) {
        auto next = encoded.find('$', pos);
        parts.push_back(encoded.substr(pos, next - pos));
        if (next == std::string_view::npos)
            break;
        pos = next + 1;
    }
    if (parts.size() != 4 || parts[0] != scheme)
        return false;
    auto [p, ec] = std::from_chars(parts[1].data(),
            parts[1].data() + parts[1].size(), out.iterations);
    if (ec != std::errc{} || out.iterations < 1)
        return false;
    return from_hex(parts[2], out.salt) && !out.salt.empty()
            && from_hex(parts[3], out.hash) && out.hash.size() == hash_size;
}

std::string new_session_id() {
    return to_hex(random_bytes(24));
}

} // namespace

const char* to_string(auth_errc errc) noexcept {
    switch (errc) {
    case auth_errc::bad_credentials: return "BadCredentials";
    case auth_errc::store_unavailable: return "StoreUnavailable";
    case auth_errc::auth_required: return "AuthRequired";
    case auth_errc::auth_expired: return "AuthExpired";
    }
    return "Unknown";
}

auth_error::auth_error(auth_errc errc, const std::string& detail)
    : std::runtime_error(std::string(to_string(errc)) + ": " + detail),
      errc_(errc) {}

std::string hash_password(std::string_view password, int iterations) {
    const auto salt = random_bytes(salt_size);
    return std::string(scheme) + "$" + std::to_string(iterations) + "$"
            + to_hex(salt) + "$" + to_hex(pbkdf2(password, salt, iterations));
}

bool verify_password(std::string_view password, std::string_view encoded) {
    parsed_hash h;
    if (!parse_hash(encoded, h))
        return false;
    const auto candidate = pbkdf2(password, h.salt, h.iterations);
    return CRYPTO_memcmp(candidate.data(), h.hash.data(), hash_size) == 0;
}

void credential_store::add(std::string user, std::string encoded_hash) {
    parsed_hash h;
    if (!parse_hash(encoded_hash, h))
        throw std::invalid_argument("malformed password hash for user '" + user + "'");
    users_[std::move(user)] = std::move(encoded_hash);
}

bool credential_store::verify(std::string_view user, std::string_view password) const {
    auto it = users_.find(user);
    if (it == users_.end()) {
        // Burn the same PBKDF2 cost as a real check against the first entry.
        if (!users_.empty())
            verify_password(password, users_.begin()->second);
        return false;
    }
    return verify_password(password, it->second);
}

session_manager::session_manager(credential_store store, std::int64_t ttl_ms,
        clock_fn clock)
    : store_(std::move(store)), ttl_ms_(ttl_ms), clock_(std::move(clock)) {}

session session_manager::login(std::string_view user, std::string_view password) {
    if (store_.empty())
        throw auth_error(auth_errc::store_unavailable, "no credentials configured");
    if (!store_.verify(user, password))
        throw auth_error(auth_errc::bad_credentials, "invalid user or password");
    const auto now = clock_();
    session s{new_session_id(), std::string(user), now, now + ttl_ms_};
    std::lock_guard lock(mutex_);
    // Expired sessions are only useful for the AuthExpired answer; drop
    // the ones far past their end.
    std::erase_if(sessions_, [&](const auto& kv) {
        return kv.second.expires_at_ms + ttl_ms_ < now;
    });
    sessions_[s.session_id] = s;
    return s;
}

session session_manager::validate(std::string_view session_id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end())
        throw auth_error(auth_errc::auth_required, "unknown session");
    if (clock_() >= it->second.expires_at_ms)
        throw auth_error(auth_errc::auth_expired, "session expired");
    return it->second;
}

} // namespace dehum::gateway
