#pragma once

// Text key files: one "name=value" line per key component, any order, each
// field exactly once. Decimals are written with 17 significant digits so a
// round trip is bit-exact.

#include <array>
#include <charconv>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "chaosbreak/keystream.hpp"

namespace chaosbreak {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline double parse_double_field(std::string_view value, std::string_view name) {
    double out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw InvalidKey(std::string(name) + ": not a valid decimal: '" + std::string(value) + "'");
    return out;
}

inline std::uint32_t parse_uint_field(std::string_view value, std::string_view name) {
    std::uint32_t out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw InvalidKey(std::string(name) + ": not a valid unsigned integer: '" +
                         std::string(value) + "'");
    return out;
}

}  // namespace detail

inline SecretKey parse_key_text(std::string_view text) {
    static constexpr std::array<std::string_view, 6> kFields = {"m1", "x0", "mu0",
                                                                "m2", "x0s", "mu0s"};
    std::array<bool, 6> seen{};
    SecretKey key{};

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        const std::string_view line = detail::trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InvalidKey("malformed key file line: '" + std::string(line) + "'");
        const std::string_view name = detail::trim(line.substr(0, eq));
        const std::string_view value = detail::trim(line.substr(eq + 1));

        std::size_t field = kFields.size();
        for (std::size_t f = 0; f < kFields.size(); ++f)
            if (name == kFields[f]) field = f;
        if (field == kFields.size())
            throw InvalidKey("unknown key field: '" + std::string(name) + "'");
        if (seen[field])
            throw InvalidKey("duplicate key field: " + std::string(name));
        seen[field] = true;

        switch (field) {
            case 0: key.m1 = detail::parse_uint_field(value, name); break;
            case 1: key.x0 = detail::parse_double_field(value, name); break;
            case 2: key.mu0 = detail::parse_double_field(value, name); break;
            case 3: key.m2 = detail::parse_uint_field(value, name); break;
            case 4: key.x0s = detail::parse_double_field(value, name); break;
            case 5: key.mu0s = detail::parse_double_field(value, name); break;
        }
    }

    for (std::size_t f = 0; f < kFields.size(); ++f)
        if (!seen[f])
            throw InvalidKey("missing key field: " + std::string(kFields[f]));
    validate(key);
    return key;
}

inline std::string format_key_text(const SecretKey& key) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "m1=%u\nx0=%.17g\nmu0=%.17g\nm2=%u\nx0s=%.17g\nmu0s=%.17g\n",
                  key.m1, key.x0, key.mu0, key.m2, key.x0s, key.mu0s);
    return std::string(buf);
}

// Random valid key: x values uniform in (0.01, 0.99), mu values in (3.57, 4],
// burn-in counts in [500, 5000]. With a seed the result is reproducible.
inline SecretKey generate_key(std::optional<std::uint64_t> seed = std::nullopt) {
    std::mt19937_64 rng(seed ? *seed : std::mt19937_64(std::random_device{}())());
    auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };  // [0,1)
    auto open_unit = [&unit]() {
        double u = unit();
        while (u == 0.0) u = unit();
        return u;
    };

    SecretKey key;
    key.m1 = 500 + std::uint32_t(rng() % 4501);
    key.m2 = 500 + std::uint32_t(rng() % 4501);
    key.x0 = 0.01 + open_unit() * 0.98;
    key.x0s = 0.01 + open_unit() * 0.98;
    key.mu0 = 4.0 - unit() * 0.43;
    key.mu0s = 4.0 - unit() * 0.43;
    validate(key);
    return key;
}

}  // namespace chaosbreak
