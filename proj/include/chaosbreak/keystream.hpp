#pragma once

// Derivation of all pseudo-random material used by the cipher: chaotic
// states from the logistic map, rank permutations, the balanced channel
// selector Y, the byte stream Z and the substitution scan schedule.
//
// All chaotic arithmetic is IEEE-754 binary64 with the step pinned to
// (mu*x)*(1-x), so identical keys give bit-identical material on every
// platform with conforming doubles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "chaosbreak/errors.hpp"
#include "chaosbreak/image.hpp"

namespace chaosbreak {

// Lower bound of the chaotic band of the logistic map.
inline constexpr double kMuChaosLow = 3.5699456;

// Six-component secret key: two burn-in counts and two (initial value,
// control parameter) pairs for the logistic map.
struct SecretKey {
    std::uint32_t m1 = 0;
    std::uint32_t m2 = 0;
    double x0 = 0.0;
    double mu0 = 0.0;
    double x0s = 0.0;
    double mu0s = 0.0;

    bool operator==(const SecretKey&) const = default;
};

inline void validate(const SecretKey& key) {
    auto check_x = [](double x, const char* name) {
        if (!(x > 0.0 && x < 1.0))
            throw InvalidKey(std::string(name) + ": must lie strictly inside (0,1)");
    };
    auto check_mu = [](double mu, const char* name) {
        // 4.0 itself is accepted; values beyond it leave the unit interval.
        if (!(mu > kMuChaosLow && mu <= 4.0))
            throw InvalidKey(std::string(name) + ": must lie in (3.5699456, 4]");
    };
    if (key.m1 < 1) throw InvalidKey("m1: must be a positive integer");
    if (key.m2 < 1) throw InvalidKey("m2: must be a positive integer");
    check_x(key.x0, "x0");
    check_mu(key.mu0, "mu0");
    check_x(key.x0s, "x0s");
    check_mu(key.mu0s, "mu0s");
}

// One logistic-map step f(x) = mu*x*(1-x), evaluated as (mu*x)*(1-x).
inline double logistic_step(double x, double mu) {
    return (mu * x) * (1.0 - x);
}

// Applies f n times. Every state that gets iterated again must lie strictly
// inside (0,1); the final value is returned unchecked (n = 0 returns x).
inline double iterate_logistic(double x, double mu, std::uint64_t n) {
    for (std::uint64_t s = 0; s < n; ++s) {
        if (!(x > 0.0 && x < 1.0))
            throw DegenerateOrbit("logistic orbit left (0,1) at value " + std::to_string(x));
        x = logistic_step(x, mu);
    }
    return x;
}

// States f^(burn_in+1)(x0) ... f^(burn_in+n)(x0). Emitted states must all
// lie strictly inside (0,1).
inline std::vector<double> generate_states(double x0, double mu, std::uint64_t burn_in,
                                           std::size_t n) {
    double x = iterate_logistic(x0, mu, burn_in);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        x = iterate_logistic(x, mu, 1);
        if (!(x > 0.0 && x < 1.0))
            throw DegenerateOrbit("logistic orbit left (0,1) at value " + std::to_string(x));
        out.push_back(x);
    }
    return out;
}

// T with states[T[0]] >= states[T[1]] >= ...; ties keep original index order.
inline std::vector<std::uint32_t> rank_permutation(std::span<const double> states) {
    std::vector<std::uint32_t> idx(states.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return states[a] > states[b]; });
    return idx;
}

// floor(x * 10^14) as an unsigned 64-bit integer. For x in (0,1) the scaled
// value stays below 2^53, so the floor is exact.
inline std::uint64_t scaled_floor(double x) {
    return static_cast<std::uint64_t>(std::floor(x * 1e14));
}

inline std::vector<std::uint8_t> derive_raw_selector(std::span<const double> states) {
    std::vector<std::uint8_t> y;
    y.reserve(states.size());
    for (double x : states) y.push_back(std::uint8_t(scaled_floor(x) % 3));
    return y;
}

inline std::vector<std::uint8_t> derive_byte_keystream(std::span<const double> states) {
    std::vector<std::uint8_t> z;
    z.reserve(states.size());
    for (double x : states) z.push_back(std::uint8_t(scaled_floor(x) % 256));
    return z;
}

// Rewrites the selector so each symbol occurs exactly mn times. y[0] is
// never modified; the counters run over the already-updated prefix, and a
// symbol is rewritten only once its own count has reached mn.
inline std::vector<std::uint8_t> balance_selector(std::vector<std::uint8_t> y, std::size_t mn) {
    if (y.size() != 3 * mn)
        throw DimensionMismatch("selector length must be 3*mn");
    std::size_t counts[3] = {0, 0, 0};
    ++counts[y[0]];
    for (std::size_t l = 1; l < y.size(); ++l) {
        std::uint8_t v = y[l];
        if (v == 0 && counts[0] >= mn)
            v = counts[1] < mn ? 1 : 2;
        else if (v == 1 && counts[1] >= mn)
            v = counts[2] < mn ? 2 : 0;
        else if (v == 2 && counts[2] >= mn)
            v = counts[0] < mn ? 0 : 1;
        y[l] = v;
        ++counts[v];
    }
    return y;
}

// Order in which substitution visits pixel-channel slots: at step l channel
// y[l] takes its next pixel in raster order. Slots are linear indices
// p = k*M*N + i*N + j; for a balanced selector the result is a bijection.
struct ScanSchedule {
    Dims dims{};
    std::vector<std::uint32_t> slots;

    SlotCoord coord(std::size_t l) const {
        const std::size_t mn = dims.pixels();
        const std::uint32_t p = slots[l];
        const std::size_t r = p % mn;
        return SlotCoord{int(r / dims.cols), int(r % dims.cols), int(p / mn)};
    }
};

inline ScanSchedule build_schedule(std::span<const std::uint8_t> y, Dims dims) {
    validate(dims);
    const std::size_t mn = dims.pixels();
    if (y.size() != 3 * mn)
        throw DimensionMismatch("selector length does not match dimensions");
    std::size_t counts[3] = {0, 0, 0};
    ScanSchedule sched{dims, {}};
    sched.slots.reserve(y.size());
    for (std::uint8_t k : y) {
        if (k > 2 || counts[k] >= mn)
            throw DimensionMismatch("selector is not balanced");
        // the exclusive prefix count of k is the raster position i*N+j
        sched.slots.push_back(std::uint32_t(k * mn + counts[k]));
        ++counts[k];
    }
    return sched;
}

// Row table T (length 3M) and per-row column tables T* (M rows of 3N).
struct PermutationTables {
    std::vector<std::uint32_t> row;
    std::vector<std::vector<std::uint32_t>> col;
};

struct KeystreamMaterial {
    PermutationTables tables;
    std::vector<std::uint8_t> selector;  // Y, balanced
    std::vector<std::uint8_t> bytes;     // Z
    ScanSchedule schedule;
};

// Full initialization: T from the first chaotic stream; T*, Y and Z all from
// the second stream; the schedule from Y.
inline KeystreamMaterial derive_all(const SecretKey& key, Dims dims) {
    validate(key);
    validate(dims);
    const std::size_t mn = dims.pixels();

    KeystreamMaterial mat;
    const auto s1 = generate_states(key.x0, key.mu0, key.m1, 3 * std::size_t(dims.rows));
    mat.tables.row = rank_permutation(s1);

    const auto s2 = generate_states(key.x0s, key.mu0s, key.m2, 3 * mn);
    const std::size_t width = 3 * std::size_t(dims.cols);
    mat.tables.col.reserve(dims.rows);
    for (int i = 0; i < dims.rows; ++i)
        mat.tables.col.push_back(rank_permutation({s2.data() + i * width, width}));

    mat.selector = balance_selector(derive_raw_selector(s2), mn);
    mat.bytes = derive_byte_keystream(s2);
    mat.schedule = build_schedule(mat.selector, dims);
    return mat;
}

}  // namespace chaosbreak
