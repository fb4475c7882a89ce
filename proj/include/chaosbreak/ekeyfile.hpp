#pragma once

// Equivalent-key files. A key is stored as three binary files sharing a stem:
//   <stem>.yhat    selector, one byte per element
//   <stem>.zhat    byte keystream
//   <stem>.posmap  position map, little-endian 32-bit unsigned per slot
// Each file starts with an 8-byte header: magic "EKY1", then M and N as
// little-endian 16-bit unsigned integers.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "chaosbreak/attack.hpp"
#include "chaosbreak/io.hpp"

namespace chaosbreak {

namespace detail {

inline constexpr std::size_t kEkeyHeaderSize = 8;

inline void put_ekey_header(std::vector<std::uint8_t>& out, Dims dims) {
    out.push_back('E');
    out.push_back('K');
    out.push_back('Y');
    out.push_back('1');
    out.push_back(std::uint8_t(dims.rows & 0xff));
    out.push_back(std::uint8_t((dims.rows >> 8) & 0xff));
    out.push_back(std::uint8_t(dims.cols & 0xff));
    out.push_back(std::uint8_t((dims.cols >> 8) & 0xff));
}

inline Dims take_ekey_header(std::span<const std::uint8_t> bytes, const std::string& name) {
    if (bytes.size() < kEkeyHeaderSize || bytes[0] != 'E' || bytes[1] != 'K' ||
        bytes[2] != 'Y' || bytes[3] != '1')
        throw EkeyFormatError(name + ": missing EKY1 header");
    const int rows = int(bytes[4]) | (int(bytes[5]) << 8);
    const int cols = int(bytes[6]) | (int(bytes[7]) << 8);
    if (rows < 1 || cols < 1)
        throw EkeyFormatError(name + ": invalid dimensions in header");
    return Dims{rows, cols};
}

inline std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
    std::filesystem::path p = stem;
    p += suffix;
    return p;
}

}  // namespace detail

inline void write_equivalent_key(const std::filesystem::path& stem, const EquivalentKey& ek) {
    const std::size_t total = ek.dims.slots();
    if (ek.dims.rows > 65535 || ek.dims.cols > 65535)
        throw EkeyFormatError("dimensions exceed the 16-bit header fields");
    if (ek.yhat.size() != total || ek.zhat.size() != total || ek.posmap.size() != total)
        throw DimensionMismatch("equivalent key streams have wrong length");

    std::vector<std::uint8_t> buf;
    buf.reserve(detail::kEkeyHeaderSize + 4 * total);

    detail::put_ekey_header(buf, ek.dims);
    buf.insert(buf.end(), ek.yhat.begin(), ek.yhat.end());
    write_file_atomic(detail::with_suffix(stem, ".yhat"), buf);

    buf.clear();
    detail::put_ekey_header(buf, ek.dims);
    buf.insert(buf.end(), ek.zhat.begin(), ek.zhat.end());
    write_file_atomic(detail::with_suffix(stem, ".zhat"), buf);

    buf.clear();
    detail::put_ekey_header(buf, ek.dims);
    for (std::uint32_t v : ek.posmap) {
        buf.push_back(std::uint8_t(v & 0xff));
        buf.push_back(std::uint8_t((v >> 8) & 0xff));
        buf.push_back(std::uint8_t((v >> 16) & 0xff));
        buf.push_back(std::uint8_t((v >> 24) & 0xff));
    }
    write_file_atomic(detail::with_suffix(stem, ".posmap"), buf);
}

inline EquivalentKey read_equivalent_key(const std::filesystem::path& stem) {
    const auto ybytes = read_file(detail::with_suffix(stem, ".yhat"));
    const auto zbytes = read_file(detail::with_suffix(stem, ".zhat"));
    const auto pbytes = read_file(detail::with_suffix(stem, ".posmap"));

    EquivalentKey ek;
    ek.dims = detail::take_ekey_header(ybytes, "yhat");
    if (detail::take_ekey_header(zbytes, "zhat") != ek.dims ||
        detail::take_ekey_header(pbytes, "posmap") != ek.dims)
        throw DimensionMismatch("equivalent key files disagree on dimensions");

    const std::size_t total = ek.dims.slots();
    if (ybytes.size() != detail::kEkeyHeaderSize + total)
        throw EkeyFormatError("yhat: wrong payload length");
    if (zbytes.size() != detail::kEkeyHeaderSize + total)
        throw EkeyFormatError("zhat: wrong payload length");
    if (pbytes.size() != detail::kEkeyHeaderSize + 4 * total)
        throw EkeyFormatError("posmap: wrong payload length");

    ek.yhat.assign(ybytes.begin() + detail::kEkeyHeaderSize, ybytes.end());
    std::size_t counts[3] = {0, 0, 0};
    for (std::uint8_t v : ek.yhat) {
        if (v > 2)
            throw EkeyFormatError("yhat: selector symbol out of range");
        ++counts[v];
    }
    if (counts[0] != ek.dims.pixels() || counts[1] != ek.dims.pixels() ||
        counts[2] != ek.dims.pixels())
        throw EkeyFormatError("yhat: selector is not balanced");

    ek.zhat.assign(zbytes.begin() + detail::kEkeyHeaderSize, zbytes.end());

    ek.posmap.resize(total);
    std::vector<bool> seen(total, false);
    for (std::size_t q = 0; q < total; ++q) {
        const std::size_t o = detail::kEkeyHeaderSize + 4 * q;
        const std::uint32_t v = std::uint32_t(pbytes[o]) | (std::uint32_t(pbytes[o + 1]) << 8) |
                                (std::uint32_t(pbytes[o + 2]) << 16) |
                                (std::uint32_t(pbytes[o + 3]) << 24);
        if (v >= total)
            throw NotABijection("posmap: entry out of range");
        if (seen[v])
            throw NotABijection("posmap: duplicate entry");
        seen[v] = true;
        ek.posmap[q] = v;
    }
    return ek;
}

}  // namespace chaosbreak
