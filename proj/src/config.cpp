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

#include <dehum/config.hpp>

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dehum {

config_error::config_error(const std::string& source, int line, const std::string& detail)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + detail
                                  : source + ": " + detail),
      line_(line),
      detail_(detail) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct value {
    std::string text;
    bool quoted{false};
};

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\'))
            in_string = !in_string;
        else if (line[i] == '#' && !in_string)
            return line.substr(0, i);
    }
    return line;
}

std::optional<value> parse_value(std::string_view raw) {
    raw = trim(raw);
    if (raw.empty())
        return std::nullopt;
    if (raw.front() != '"')
        return value{std::string(raw), false};
    if (raw.size() < 2 || raw.back() != '"')
        return std::nullopt;
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
        if (raw[i] == '\\' && i + 2 < raw.size()) {
            const char c = raw[++i];
            out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
        } else if (raw[i] == '"') {
            return std::nullopt;
        } else {
            out += raw[i];
        }
    }
    return value{std::move(out), true};
}

class reader {
public:
    reader(const std::string& source, int line) : source_(source), line_(line) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw config_error(source_, line_, msg);
    }

    std::string string(const value& v) const {
        if (!v.quoted)
            fail("expected a quoted string");
        return v.text;
    }

    double number(const value& v) const {
        if (v.quoted)
            fail("expected a number, got a string");
        double out{};
        auto [p, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
        if (ec != std::errc{} || p != v.text.data() + v.text.size())
            fail("invalid number '" + v.text + "'");
        return out;
    }

    std::int64_t integer(const value& v, std::int64_t lo, std::int64_t hi) const {
        if (v.quoted)
            fail("expected an integer, got a string");
        std::int64_t out{};
        auto [p, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
        if (ec != std::errc{} || p != v.text.data() + v.text.size())
            fail("invalid integer '" + v.text + "'");
        if (out < lo || out > hi)
            fail("value " + v.text + " outside [" + std::to_string(lo) + ", "
                    + std::to_string(hi) + "]");
        return out;
    }

    net::endpoint endpoint(const value& v, const net::endpoint& defaults) const {
        try {
            return net::endpoint::parse(string(v), defaults);
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }

private:
    const std::string& source_;
    int line_;
};

} // namespace

bench_config parse_config(std::string_view text, const std::string& source_name,
        const std::filesystem::path& base_dir) {
    bench_config cfg;
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() ? base_dir / path : path;
    };

    using handler = std::function<void(const reader&, const value&)>;
    const std::map<std::string, std::map<std::string, handler>> schema{
        {"modbus", {
            {"listen", [&](const reader& r, const value& v) {
                cfg.modbus_listen = r.endpoint(v, {"127.0.0.1", default_modbus_port});
            }},
            {"unit_id", [&](const reader& r, const value& v) {
                cfg.poll.unit_id = static_cast<std::uint8_t>(r.integer(v, 1, 247));
            }},
        }},
        {"poll", {
            {"period_ms", [&](const reader& r, const value& v) {
                cfg.poll.poll_period_ms = r.integer(v, 1, 3'600'000);
            }},
            {"timeout_ms", [&](const reader& r, const value& v) {
                cfg.poll.response_timeout_ms = r.integer(v, 1, 3'600'000);
            }},
            {"max_retries", [&](const reader& r, const value& v) {
                cfg.poll.max_retries = static_cast<int>(r.integer(v, 0, 100));
            }},
        }},
        {"link", {
            {"bit_error_rate", [&](const reader& r, const value& v) {
                cfg.link.bit_error_rate = r.number(v);
            }},
            {"drop_rate", [&](const reader& r, const value& v) {
                cfg.link.drop_rate = r.number(v);
            }},
            {"delay_ms", [&](const reader& r, const value& v) {
                cfg.link.delay_ms = r.integer(v, 0, 60'000);
            }},
            {"seed", [&](const reader& r, const value& v) {
                cfg.link.seed = static_cast<std::uint64_t>(
                        r.integer(v, 0, std::numeric_limits<std::int64_t>::max()));
            }},
            {"tunnel", [&](const reader& r, const value& v) {
                cfg.tunnel = r.endpoint(v, {"127.0.0.1", default_tunnel_port});
            }},
        }},
        {"bridge", {
            {"listen", [&](const reader& r, const value& v) {
                cfg.bridge_listen = r.endpoint(v, {"127.0.0.1", default_bridge_port});
            }},
            {"session_ttl_s", [&](const reader& r, const value& v) {
                cfg.session_ttl_ms = r.integer(v, 1, 30LL * 24 * 3600) * 1000;
            }},
            {"web_root", [&](const reader& r, const value& v) {
                cfg.web_root = resolve(r.string(v));
            }},
        }},
        {"plant", {
            {"presets", [&](const reader& r, const value& v) {
                cfg.presets = resolve(r.string(v));
            }},
            {"speed", [&](const reader& r, const value& v) {
                cfg.speed = r.number(v);
                if (!(cfg.speed > 0.0) || cfg.speed > 1000.0)
                    r.fail("speed must be in (0, 1000]");
            }},
        }},
        {"client", {
            {"user", [&](const reader& r, const value& v) { cfg.client_user = r.string(v); }},
            {"password", [&](const reader& r, const value& v) {
                cfg.client_password = r.string(v);
            }},
        }},
    };

    std::string section;
    std::set<std::string> seen_sections;
    std::set<std::string> seen_keys;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const reader r(source_name, line_no);
        auto line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                r.fail("unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "users" && !schema.count(section))
                r.fail("unknown section [" + section + "]");
            if (!seen_sections.insert(section).second)
                r.fail("duplicate section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            r.fail("expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty())
            r.fail("missing key");
        if (section.empty())
            r.fail("key '" + key + "' outside any section");
        auto v = parse_value(line.substr(eq + 1));
        if (!v)
            r.fail("malformed value for '" + key + "'");
        if (!seen_keys.insert(section + "." + key).second)
            r.fail("duplicate key '" + key + "' in [" + section + "]");

        if (section == "users") {
            cfg.users.emplace_back(key, r.string(*v));
            continue;
        }
        const auto& keys = schema.at(section);
        auto it = keys.find(key);
        if (it == keys.end())
            r.fail("unknown key '" + key + "' in [" + section + "]");
        it->second(r, *v);
    }

    try {
        cfg.poll.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(source_name, 0, std::string("[poll] ") + e.what());
    }
    try {
        cfg.link.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(source_name, 0, std::string("[link] ") + e.what());
    }
    return cfg;
}

bench_config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error(path.string(), 0, "cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    auto base = path.parent_path();
    if (base.empty())
        base = ".";
    auto cfg = parse_config(buf.str(), path.string(), base);
    cfg.source = path;
    return cfg;
}

std::optional<std::filesystem::path> resolve_config_path(
        const std::optional<std::filesystem::path>& explicit_path) {
    if (explicit_path)
        return explicit_path;
    if (const char* env = std::getenv(config_env_var); env && *env)
        return std::filesystem::path(env);
    return std::nullopt;
}

} // namespace dehum
