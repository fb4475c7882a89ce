#pragma once

// Shared helpers for the test suites: deterministic random fixtures and the
// FNV-1a digest used to pin regression vectors.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "chaosbreak/image.hpp"
#include "chaosbreak/keystream.hpp"

namespace testsupport {

inline chaosbreak::SecretKey random_test_key(std::mt19937_64& rng) {
    auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    chaosbreak::SecretKey key;
    key.m1 = 500 + std::uint32_t(rng() % 2501);
    key.m2 = 500 + std::uint32_t(rng() % 2501);
    key.x0 = 0.02 + unit() * 0.96;
    key.x0s = 0.02 + unit() * 0.96;
    key.mu0 = 3.999 + unit() * 0.0009;  // mu near 4: robustly chaotic regime
    key.mu0s = 3.999 + unit() * 0.0009;
    return key;
}

inline chaosbreak::ColourImage random_image(std::mt19937_64& rng, chaosbreak::Dims dims) {
    chaosbreak::ColourImage img(dims);
    for (std::size_t p = 0; p < img.size(); ++p)
        img[p] = std::uint8_t(rng() & 0xff);
    return img;
}

// FNV-1a, 64-bit.
class Fnv64 {
  public:
    void feed(std::uint8_t b) {
        hash_ ^= b;
        hash_ *= 0x100000001b3ULL;
    }
    void feed(std::span<const std::uint8_t> bytes) {
        for (std::uint8_t b : bytes) feed(b);
    }
    void feed_u32le(std::span<const std::uint32_t> values) {
        for (std::uint32_t v : values) {
            feed(std::uint8_t(v & 0xff));
            feed(std::uint8_t((v >> 8) & 0xff));
            feed(std::uint8_t((v >> 16) & 0xff));
            feed(std::uint8_t((v >> 24) & 0xff));
        }
    }
    std::uint64_t value() const { return hash_; }

  private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t digest_bytes(std::span<const std::uint8_t> bytes) {
    Fnv64 h;
    h.feed(bytes);
    return h.value();
}

inline std::uint64_t digest_u32le(std::span<const std::uint32_t> values) {
    Fnv64 h;
    h.feed_u32le(values);
    return h.value();
}

}  // namespace testsupport
