#pragma once

// The target cipher: row permutation, column permutation and a feedback
// substitution, plus their exact inverses.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "chaosbreak/image.hpp"
#include "chaosbreak/keystream.hpp"

namespace chaosbreak {

namespace detail {

inline void check_table(std::span<const std::uint32_t> t, std::size_t expected,
                        const char* what) {
    if (t.size() != expected)
        throw DimensionMismatch(std::string(what) + ": wrong table length");
    for (std::uint32_t v : t)
        if (v >= expected)
            throw DimensionMismatch(std::string(what) + ": table entry out of range");
}

}  // namespace detail

// out(i,j,k) = in(i*,j,k*) with i* = t[kM+i] mod M, k* = t[kM+i] / M.
inline ColourImage row_permute(const ColourImage& img, std::span<const std::uint32_t> t) {
    const Dims d = img.dims();
    detail::check_table(t, 3 * std::size_t(d.rows), "row permutation");
    const std::size_t mn = d.pixels();
    const std::size_t n = std::size_t(d.cols);
    ColourImage out(d);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < d.rows; ++i) {
            const std::uint32_t v = t[std::size_t(k) * d.rows + i];
            const std::size_t src = (v / d.rows) * mn + (v % d.rows) * n;
            const std::size_t dst = std::size_t(k) * mn + std::size_t(i) * n;
            std::copy_n(img.data().begin() + src, n, out.data().begin() + dst);
        }
    return out;
}

inline ColourImage row_unpermute(const ColourImage& img, std::span<const std::uint32_t> t) {
    const Dims d = img.dims();
    detail::check_table(t, 3 * std::size_t(d.rows), "row permutation");
    const std::size_t mn = d.pixels();
    const std::size_t n = std::size_t(d.cols);
    ColourImage out(d);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < d.rows; ++i) {
            const std::uint32_t v = t[std::size_t(k) * d.rows + i];
            const std::size_t dst = (v / d.rows) * mn + (v % d.rows) * n;
            const std::size_t src = std::size_t(k) * mn + std::size_t(i) * n;
            std::copy_n(img.data().begin() + src, n, out.data().begin() + dst);
        }
    return out;
}

// out(i,j,k) = in(i,j**,k**) with j** = t*[i][kN+j] mod N, k** = t*[i][kN+j] / N.
inline ColourImage column_permute(const ColourImage& img,
                                  const std::vector<std::vector<std::uint32_t>>& tstar) {
    const Dims d = img.dims();
    if (tstar.size() != std::size_t(d.rows))
        throw DimensionMismatch("column permutation: wrong row count");
    const std::size_t mn = d.pixels();
    const std::size_t n = std::size_t(d.cols);
    ColourImage out(d);
    for (int i = 0; i < d.rows; ++i) {
        detail::check_table(tstar[i], 3 * n, "column permutation");
        const std::size_t base = std::size_t(i) * n;
        for (std::size_t kj = 0; kj < 3 * n; ++kj) {
            const std::uint32_t v = tstar[i][kj];
            out[(kj / n) * mn + base + (kj % n)] = img[(v / n) * mn + base + (v % n)];
        }
    }
    return out;
}

inline ColourImage column_unpermute(const ColourImage& img,
                                    const std::vector<std::vector<std::uint32_t>>& tstar) {
    const Dims d = img.dims();
    if (tstar.size() != std::size_t(d.rows))
        throw DimensionMismatch("column permutation: wrong row count");
    const std::size_t mn = d.pixels();
    const std::size_t n = std::size_t(d.cols);
    ColourImage out(d);
    for (int i = 0; i < d.rows; ++i) {
        detail::check_table(tstar[i], 3 * n, "column permutation");
        const std::size_t base = std::size_t(i) * n;
        for (std::size_t kj = 0; kj < 3 * n; ++kj) {
            const std::uint32_t v = tstar[i][kj];
            out[(v / n) * mn + base + (v % n)] = img[(kj / n) * mn + base + (kj % n)];
        }
    }
    return out;
}

namespace detail {

inline void check_stream(const ColourImage& img, const ScanSchedule& sched,
                         std::span<const std::uint8_t> z) {
    if (sched.dims != img.dims() || sched.slots.size() != img.size() || z.size() != img.size())
        throw DimensionMismatch("schedule/keystream do not match image");
}

}  // namespace detail

// c[s_0] = p[s_0] + z_0; c[s_l] = p[s_l] + p[s_{l-1}] + c[s_{l-1}] + z_l (mod 256).
inline ColourImage substitute(const ColourImage& img, const ScanSchedule& sched,
                              std::span<const std::uint8_t> z) {
    detail::check_stream(img, sched, z);
    ColourImage out(img.dims());
    const std::uint32_t s0 = sched.slots[0];
    out[s0] = mod256(img[s0] + z[0]);
    for (std::size_t l = 1; l < sched.slots.size(); ++l) {
        const std::uint32_t s = sched.slots[l];
        const std::uint32_t p = sched.slots[l - 1];
        out[s] = mod256(int(img[s]) + img[p] + out[p] + z[l]);
    }
    return out;
}

// Inverse of substitute, walked in schedule order: each step needs the
// already-recovered previous plain value.
inline ColourImage unsubstitute(const ColourImage& img, const ScanSchedule& sched,
                                std::span<const std::uint8_t> z) {
    detail::check_stream(img, sched, z);
    ColourImage out(img.dims());
    const std::uint32_t s0 = sched.slots[0];
    out[s0] = mod256(int(img[s0]) - z[0]);
    for (std::size_t l = 1; l < sched.slots.size(); ++l) {
        const std::uint32_t s = sched.slots[l];
        const std::uint32_t p = sched.slots[l - 1];
        out[s] = mod256(int(img[s]) - out[p] - img[p] - z[l]);
    }
    return out;
}

inline ColourImage encrypt(const ColourImage& img, const KeystreamMaterial& mat) {
    return substitute(column_permute(row_permute(img, mat.tables.row), mat.tables.col),
                      mat.schedule, mat.bytes);
}

inline ColourImage decrypt(const ColourImage& img, const KeystreamMaterial& mat) {
    return row_unpermute(column_unpermute(unsubstitute(img, mat.schedule, mat.bytes),
                                          mat.tables.col),
                         mat.tables.row);
}

inline ColourImage encrypt(const ColourImage& img, const SecretKey& key) {
    return encrypt(img, derive_all(key, img.dims()));
}

inline ColourImage decrypt(const ColourImage& img, const SecretKey& key) {
    return decrypt(img, derive_all(key, img.dims()));
}

}  // namespace chaosbreak
