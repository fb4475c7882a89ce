#pragma once

// Chosen-plaintext attack. Solid plain-images are invariant under both
// position permutations, so a pair of solid ciphertexts exposes the
// substitution alone: the difference at the slot visited in step l is
// (2l+1)*D mod 256 with D = d1-d2, which identifies the channel visited at
// every step and hence the selector Y. The byte stream Z then falls out of
// the substitution equations, and index-valued probe images read off the
// composed position permutation directly.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "chaosbreak/cipher.hpp"

namespace chaosbreak {

// Least period of l -> (2l+1)*d mod 256.
inline int difference_period(int d) {
    const int r = ((d % 256) + 256) % 256;
    if (r == 0)
        throw InvalidDifference("difference must be nonzero mod 256");
    return 128 / std::gcd(r, 256);
}

// Chosen solid values and the modular difference progression they induce.
// A difference of 128 makes the progression constant and is rejected; odd
// differences give the maximal period 128.
struct DifferenceParams {
    std::uint8_t d1 = 127;
    std::uint8_t d2 = 0;
    int d = 127;       // signed difference d1 - d2
    int period = 128;  // 128 / gcd(d, 256)

    static DifferenceParams make(std::uint8_t d1, std::uint8_t d2) {
        const int d = int(d1) - int(d2);
        const int r = ((d % 256) + 256) % 256;
        if (r == 0)
            throw InvalidDifference("d1 and d2 must differ");
        if (r == 128)
            throw InvalidDifference("difference of 128 gives a constant progression");
        return DifferenceParams{d1, d2, d, difference_period(d)};
    }
};

// Attack output: recovered selector, byte stream and the position bijection
// (permuted slot -> original slot) replacing both permutations.
struct EquivalentKey {
    Dims dims{};
    std::vector<std::uint8_t> yhat;
    std::vector<std::uint8_t> zhat;
    std::vector<std::uint32_t> posmap;
};

// Chosen-plaintext access to the attacked cipher under one hidden key.
// Queries are deterministic: identical plaintexts give identical ciphertexts.
class EncryptionOracle {
  public:
    virtual ~EncryptionOracle() = default;
    virtual Dims dims() const = 0;
    virtual ColourImage query(const ColourImage& plain) = 0;
};

// In-process oracle holding the attacked key; counts queries issued.
class KeyedOracle final : public EncryptionOracle {
  public:
    KeyedOracle(const SecretKey& key, Dims dims)
        : dims_(dims), material_(derive_all(key, dims)) {}

    Dims dims() const override { return dims_; }

    ColourImage query(const ColourImage& plain) override {
        ++queries_;
        return encrypt(plain, material_);
    }

    std::size_t query_count() const { return queries_; }

  private:
    Dims dims_;
    KeystreamMaterial material_;
    std::size_t queries_ = 0;
};

// Recovers Y from the ciphertexts of two solid images. At step l, among the
// channels not yet filled, those whose next raster slot carries ciphertext
// difference (2l+1)*D mod 256 are candidates; anything but a single
// candidate raises AmbiguousChannel.
inline std::vector<std::uint8_t> recover_selector(const ColourImage& c1, const ColourImage& c2,
                                                  const DifferenceParams& params) {
    const Dims d = c1.dims();
    if (c2.dims() != d)
        throw DimensionMismatch("ciphertext pair has differing dimensions");
    const std::size_t mn = d.pixels();
    const std::uint32_t dres = std::uint32_t(((params.d % 256) + 256) % 256);

    std::size_t counts[3] = {0, 0, 0};
    std::vector<std::uint8_t> y;
    y.reserve(3 * mn);
    for (std::size_t l = 0; l < 3 * mn; ++l) {
        const std::uint8_t target = std::uint8_t(((2 * l + 1) % 256) * dres % 256);
        int cands[3];
        int ncand = 0;
        for (int k = 0; k < 3; ++k) {
            if (counts[k] >= mn) continue;
            const std::size_t p = std::size_t(k) * mn + counts[k];
            if (std::uint8_t(c1[p] - c2[p]) == target) cands[ncand++] = k;
        }
        if (ncand != 1)
            throw AmbiguousChannel(l, std::vector<int>(cands, cands + ncand));
        y.push_back(std::uint8_t(cands[0]));
        ++counts[cands[0]];
    }
    return y;
}

// Inverts the substitution equations on the ciphertext of the solid-d1
// image: z_0 = c[s_0] - d1, z_l = c[s_l] - 2*d1 - c[s_{l-1}] (mod 256).
inline std::vector<std::uint8_t> recover_byte_keystream(const ColourImage& c1, std::uint8_t d1,
                                                        std::span<const std::uint8_t> yhat) {
    const ScanSchedule sched = build_schedule(yhat, c1.dims());
    std::vector<std::uint8_t> z(sched.slots.size());
    z[0] = mod256(int(c1[sched.slots[0]]) - d1);
    for (std::size_t l = 1; l < z.size(); ++l)
        z[l] = mod256(int(c1[sched.slots[l]]) - 2 * int(d1) - c1[sched.slots[l - 1]]);
    return z;
}

// Number of probe images needed to give every slot a unique id: one byte of
// the slot index per probe.
inline int probe_count(Dims dims) {
    validate(dims);
    const int bits = std::bit_width(std::uint64_t(dims.slots()) - 1);
    return (bits + 7) / 8;
}

// Probe q holds byte (p >> 8q) & 0xff at linear slot p, so the probe bytes
// at any slot concatenate to the slot's index.
inline std::vector<ColourImage> build_permutation_probes(Dims dims) {
    const int q = probe_count(dims);
    std::vector<ColourImage> probes;
    probes.reserve(q);
    for (int qi = 0; qi < q; ++qi) {
        ColourImage probe(dims);
        for (std::size_t p = 0; p < probe.size(); ++p)
            probe[p] = std::uint8_t((p >> (8 * qi)) & 0xff);
        probes.push_back(std::move(probe));
    }
    return probes;
}

// Decodes the slot ids from substitution-stripped probe ciphertexts.
// posmap[q] is the original slot whose byte the permutations moved to q.
inline std::vector<std::uint32_t> recover_position_map(std::span<const ColourImage> stripped,
                                                       Dims dims) {
    if (stripped.size() != std::size_t(probe_count(dims)))
        throw DimensionMismatch("wrong number of stripped probes");
    for (const ColourImage& s : stripped)
        if (s.dims() != dims)
            throw DimensionMismatch("stripped probe has wrong dimensions");

    const std::size_t total = dims.slots();
    std::vector<std::uint32_t> posmap(total);
    std::vector<bool> seen(total, false);
    for (std::size_t p = 0; p < total; ++p) {
        std::uint64_t id = 0;
        for (std::size_t qi = 0; qi < stripped.size(); ++qi)
            id |= std::uint64_t(stripped[qi][p]) << (8 * qi);
        if (id >= total)
            throw NotABijection("decoded slot id out of range");
        if (seen[id])
            throw NotABijection("duplicate decoded slot id");
        seen[id] = true;
        posmap[p] = std::uint32_t(id);
    }
    return posmap;
}

// Wall-clock per attack stage, for reporting.
struct AttackTrace {
    double solid_queries_ms = 0.0;
    double selector_ms = 0.0;
    double keystream_ms = 0.0;
    double probe_queries_ms = 0.0;
    double position_map_ms = 0.0;
};

namespace detail {

class StageTimer {
  public:
    explicit StageTimer(double* out) : out_(out), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        if (out_)
            *out_ = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start_)
                        .count();
    }

  private:
    double* out_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// The full break: 2 solid queries recover Y and Z, then probe_count(dims)
// probe queries recover the position map. Issues exactly
// 2 + probe_count(dims) oracle queries.
inline EquivalentKey run_attack(EncryptionOracle& oracle, const DifferenceParams& params,
                                AttackTrace* trace = nullptr) {
    const Dims dims = oracle.dims();
    EquivalentKey ek;
    ek.dims = dims;

    ColourImage c1, c2;
    {
        detail::StageTimer t(trace ? &trace->solid_queries_ms : nullptr);
        c1 = oracle.query(solid_image(dims, params.d1));
        c2 = oracle.query(solid_image(dims, params.d2));
    }
    {
        detail::StageTimer t(trace ? &trace->selector_ms : nullptr);
        ek.yhat = recover_selector(c1, c2, params);
    }
    {
        detail::StageTimer t(trace ? &trace->keystream_ms : nullptr);
        ek.zhat = recover_byte_keystream(c1, params.d1, ek.yhat);
    }
    std::vector<ColourImage> stripped;
    {
        detail::StageTimer t(trace ? &trace->probe_queries_ms : nullptr);
        const ScanSchedule sched = build_schedule(ek.yhat, dims);
        for (ColourImage& probe : build_permutation_probes(dims))
            stripped.push_back(unsubstitute(oracle.query(probe), sched, ek.zhat));
    }
    {
        detail::StageTimer t(trace ? &trace->position_map_ms : nullptr);
        ek.posmap = recover_position_map(stripped, dims);
    }
    return ek;
}

// Decrypts a ciphertext produced under the attacked key: strip the
// substitution, then route every byte back to its original slot.
inline ColourImage break_ciphertext(const ColourImage& c, const EquivalentKey& ek) {
    if (c.dims() != ek.dims)
        throw DimensionMismatch("ciphertext dimensions do not match equivalent key");
    const std::size_t total = ek.dims.slots();
    if (ek.zhat.size() != total || ek.posmap.size() != total)
        throw DimensionMismatch("equivalent key streams have wrong length");

    const ScanSchedule sched = build_schedule(ek.yhat, ek.dims);
    const ColourImage stripped = unsubstitute(c, sched, ek.zhat);
    ColourImage plain(ek.dims);
    for (std::size_t q = 0; q < total; ++q) {
        if (ek.posmap[q] >= total)
            throw NotABijection("position map entry out of range");
        plain[ek.posmap[q]] = stripped[q];
    }
    return plain;
}

// Upper bound on the probability of an ambiguity event for an mn-pixel
// image: sum over k of (3mn - k*T) * (2/3)^(k*T) / 3, terms accumulated in
// ascending k in binary64. An empty sum is 0.
inline double failure_probability_bound(std::uint64_t mn, int period) {
    if (period < 1 || 128 % period != 0)
        throw InvalidDifference("period must divide 128");
    const std::uint64_t kmax = (2 * mn) / std::uint64_t(period);
    double sum = 0.0;
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        const double kt = double(k) * period;
        sum += (3.0 * double(mn) - kt) * std::pow(2.0 / 3.0, kt) / 3.0;
    }
    return sum;
}

}  // namespace chaosbreak
