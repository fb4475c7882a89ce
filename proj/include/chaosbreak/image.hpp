#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "chaosbreak/errors.hpp"

namespace chaosbreak {

// Image dimensions: M rows by N columns, three colour channels.
struct Dims {
    int rows = 0;
    int cols = 0;

    std::size_t pixels() const { return std::size_t(rows) * std::size_t(cols); }
    std::size_t slots() const { return 3 * pixels(); }
    bool operator==(const Dims&) const = default;
};

inline void validate(Dims dims) {
    if (dims.rows < 1 || dims.cols < 1)
        throw DimensionMismatch("image dimensions must be at least 1x1");
}

// One pixel-channel slot: row i, column j, channel k.
struct SlotCoord {
    int i;
    int j;
    int k;
    bool operator==(const SlotCoord&) const = default;
};

// M x N x 3 byte volume in channel-major layout: p = k*M*N + i*N + j.
class ColourImage {
  public:
    ColourImage() = default;

    explicit ColourImage(Dims dims, std::uint8_t fill = 0) : dims_(dims) {
        validate(dims);
        data_.assign(dims.slots(), fill);
    }

    ColourImage(Dims dims, std::vector<std::uint8_t> data)
        : dims_(dims), data_(std::move(data)) {
        validate(dims);
        if (data_.size() != dims.slots())
            throw DimensionMismatch("payload size does not match dimensions");
    }

    Dims dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    std::size_t index(int i, int j, int k) const {
        return std::size_t(k) * dims_.pixels() + std::size_t(i) * dims_.cols + j;
    }

    std::uint8_t at(int i, int j, int k) const { return data_[index(i, j, k)]; }
    std::uint8_t& at(int i, int j, int k) { return data_[index(i, j, k)]; }

    std::uint8_t operator[](std::size_t p) const { return data_[p]; }
    std::uint8_t& operator[](std::size_t p) { return data_[p]; }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    bool operator==(const ColourImage&) const = default;

  private:
    Dims dims_{};
    std::vector<std::uint8_t> data_;
};

inline ColourImage solid_image(Dims dims, std::uint8_t value) {
    return ColourImage(dims, value);
}

// Non-negative residue of v modulo 256.
inline std::uint8_t mod256(int v) {
    return static_cast<std::uint8_t>(v & 0xff);
}

}  // namespace chaosbreak
