#pragma once

// Binary PPM (P6, maxval 255) reader and writer. Reading tolerates
// whitespace variants and '#' comments in the header; writing is canonical:
// "P6\n<w> <h>\n255\n" followed by the interleaved payload.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "chaosbreak/image.hpp"
#include "chaosbreak/io.hpp"

namespace chaosbreak {

namespace detail {

inline bool ppm_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

inline void skip_separators(std::span<const std::uint8_t> in, std::size_t& off) {
    while (off < in.size()) {
        if (ppm_space(in[off])) {
            ++off;
        } else if (in[off] == '#') {
            while (off < in.size() && in[off] != '\n') ++off;
        } else {
            break;
        }
    }
}

inline std::uint64_t parse_header_number(std::span<const std::uint8_t> in, std::size_t& off,
                                         const char* what) {
    skip_separators(in, off);
    if (off >= in.size() || in[off] < '0' || in[off] > '9')
        throw MalformedHeader(std::string("expected ") + what);
    std::uint64_t value = 0;
    while (off < in.size() && in[off] >= '0' && in[off] <= '9') {
        value = value * 10 + (in[off] - '0');
        if (value > 10'000'000)
            throw MalformedHeader(std::string(what) + " out of range");
        ++off;
    }
    return value;
}

}  // namespace detail

inline ColourImage read_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
        throw MalformedHeader("not a binary P6 file");
    std::size_t off = 2;
    const std::uint64_t width = detail::parse_header_number(bytes, off, "width");
    const std::uint64_t height = detail::parse_header_number(bytes, off, "height");
    const std::uint64_t maxval = detail::parse_header_number(bytes, off, "maxval");
    if (maxval != 255)
        throw UnsupportedMaxval("maxval must be 255, got " + std::to_string(maxval));
    if (off >= bytes.size() || !detail::ppm_space(bytes[off]))
        throw MalformedHeader("missing whitespace before payload");
    ++off;  // exactly one separator byte, then the payload
    if (width < 1 || height < 1 || width > 65535 || height > 65535)
        throw MalformedHeader("unsupported dimensions");

    const Dims dims{int(height), int(width)};
    if (bytes.size() - off < dims.slots())
        throw TruncatedPayload("payload shorter than " + std::to_string(dims.slots()) + " bytes");

    // interleaved RGB triplets -> channel-major planes
    ColourImage img(dims);
    const std::uint8_t* p = bytes.data() + off;
    const std::size_t mn = dims.pixels();
    for (std::size_t px = 0; px < mn; ++px)
        for (std::size_t k = 0; k < 3; ++k)
            img[k * mn + px] = p[px * 3 + k];
    return img;
}

inline std::vector<std::uint8_t> write_ppm(const ColourImage& img) {
    const Dims dims = img.dims();
    const std::string header = "P6\n" + std::to_string(dims.cols) + " " +
                               std::to_string(dims.rows) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + img.size());
    out.insert(out.end(), header.begin(), header.end());
    const std::size_t mn = dims.pixels();
    for (std::size_t px = 0; px < mn; ++px)
        for (std::size_t k = 0; k < 3; ++k)
            out.push_back(img[k * mn + px]);
    return out;
}

inline ColourImage read_ppm_file(const std::filesystem::path& path) {
    return read_ppm(read_file(path));
}

inline void write_ppm_file(const std::filesystem::path& path, const ColourImage& img) {
    write_file_atomic(path, write_ppm(img));
}

}  // namespace chaosbreak
