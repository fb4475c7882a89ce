// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chaosbreak/attack.hpp"
#include "chaosbreak/cipher.hpp"
#include "support.hpp"

using namespace chaosbreak;

namespace {

const SecretKey kReferenceKey{1000, 2000, 0.123456789764, 4.0, 0.567891234567, 3.999999};

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome criterion1_reference_break() {
    const Dims dims{512, 512};
    const auto t0 = std::chrono::steady_clock::now();

    KeyedOracle oracle(kReferenceKey, dims);
    const auto ek = run_attack(oracle, DifferenceParams::make(127, 0));

    std::mt19937_64 rng(2024);
    const auto plain = testsupport::random_image(rng, dims);
    const auto cipher = encrypt(plain, kReferenceKey);
    const auto recovered = break_ciphertext(cipher, ek);

    std::size_t differing = 0;
    for (std::size_t p = 0; p < plain.size(); ++p)
        if (plain[p] != recovered[p]) ++differing;

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream detail;
    detail << oracle.query_count() << " chosen images, " << differing << " differing bytes, "
           << secs << " s";
    return {differing == 0 && oracle.query_count() == 5, detail.str()};
}

Outcome criterion2_query_budget() {
    const int probes = probe_count(Dims{512, 512});
    KeyedOracle oracle(kReferenceKey, Dims{512, 512});
    run_attack(oracle, DifferenceParams::make(127, 0));
    std::ostringstream detail;
    detail << "probes=" << probes << ", total chosen images=" << oracle.query_count();
    return {probes == 3 && oracle.query_count() == 5, detail.str()};
}

Outcome criterion3_probability_bound() {
    const double p = failure_probability_bound(2272ULL * 1704ULL, 128);
    const double rel = std::abs(p - 1.1173e-16) / 1.1173e-16;

    bool monotone = true;
    double prev = -1.0;
    for (std::uint64_t mn = 10; mn <= 10'000'000; mn *= 10) {
        const double v = failure_probability_bound(mn, 128);
        if (!(v > prev)) monotone = false;
        prev = v;
    }

    std::ostringstream detail;
    detail << "bound=" << p << ", rel err=" << rel << ", grid strictly increasing="
           << (monotone ? "yes" : "no");
    return {rel <= 0.005 && monotone, detail.str()};
}

Outcome criterion4_period_law() {
    for (int d = 1; d <= 255; ++d) {
        std::vector<int> seq(512);
        for (int l = 0; l < 512; ++l) seq[l] = ((2 * l + 1) * d) % 256;
        int brute = -1;
        for (int t = 1; t <= 256 && brute < 0; ++t) {
            bool ok = true;
            for (int l = 0; l < 256 && ok; ++l) ok = seq[l + t] == seq[l];
            if (ok) brute = t;
        }
        if (difference_period(d) != brute) {
            std::ostringstream detail;
            detail << "mismatch at d=" << d << ": formula=" << difference_period(d)
                   << " brute=" << brute;
            return {false, detail.str()};
        }
    }
    return {true, "all d in 1..255 match the brute-forced least period"};
}

Outcome criterion5_difference_progression() {
    std::mt19937_64 rng(501);
    const Dims dims{32, 32};
    for (int trial = 0; trial < 100; ++trial) {
        const auto key = testsupport::random_test_key(rng);
        const auto mat = derive_all(key, dims);
        const auto c1 = encrypt(solid_image(dims, 127), mat);
        const auto c2 = encrypt(solid_image(dims, 0), mat);
        for (std::size_t l = 0; l < mat.schedule.slots.size(); ++l) {
            const std::uint32_t s = mat.schedule.slots[l];
            if (std::uint8_t(c1[s] - c2[s]) != mod256(int((2 * l + 1) % 256) * 127)) {
                std::ostringstream detail;
                detail << "trial " << trial << " failed at step " << l;
                return {false, detail.str()};
            }
        }
    }
    return {true, "100/100 trials match (2l+1)*127 mod 256 at every step"};
}

Outcome criterion6_selector_recovery_rate() {
    std::mt19937_64 rng(601);
    const Dims dims{32, 32};
    const auto params = DifferenceParams::make(127, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto key = testsupport::random_test_key(rng);
        const auto mat = derive_all(key, dims);
        const auto c1 = encrypt(solid_image(dims, 127), mat);
        const auto c2 = encrypt(solid_image(dims, 0), mat);
        try {
            if (recover_selector(c1, c2, params) != mat.selector) {
                std::ostringstream detail;
                detail << "wrong selector in trial " << trial;
                return {false, detail.str()};
            }
        } catch (const AmbiguousChannel& e) {
            std::ostringstream detail;
            detail << "AmbiguousChannel at step " << e.step << " in trial " << trial;
            return {false, detail.str()};
        }
    }
    return {true, "1000/1000 trials recovered the exact selector"};
}

Outcome criterion7_inverse_suites() {
    std::mt19937_64 rng(701);
    for (int trial = 0; trial < 100; ++trial) {
        const Dims dims{1 + int(rng() % 12), 1 + int(rng() % 12)};
        const auto key = testsupport::random_test_key(rng);
        const auto mat = derive_all(key, dims);
        const auto img = testsupport::random_image(rng, dims);

        if (row_unpermute(row_permute(img, mat.tables.row), mat.tables.row) != img)
            return {false, "row permute round trip failed"};
        if (column_unpermute(column_permute(img, mat.tables.col), mat.tables.col) != img)
            return {false, "column permute round trip failed"};
        if (unsubstitute(substitute(img, mat.schedule, mat.bytes), mat.schedule, mat.bytes) !=
            img)
            return {false, "substitute round trip failed"};
        if (decrypt(encrypt(img, mat), mat) != img)
            return {false, "encrypt round trip failed"};
        if (encrypt(decrypt(img, mat), mat) != img)
            return {false, "decrypt-then-encrypt round trip failed"};
    }
    return {true, "100 randomized (image, key) pairs per operation pair, byte-exact"};
}

Outcome criterion8_micro_vectors() {
    using V = std::vector<std::uint8_t>;
    if (balance_selector(V{0, 0, 0, 1, 2, 2}, 2) != V{0, 0, 1, 1, 2, 2})
        return {false, "balance_selector [0,0,0,1,2,2]"};
    if (balance_selector(V{0, 0, 0, 0, 0, 0}, 2) != V{0, 0, 1, 1, 2, 2})
        return {false, "balance_selector all zeros"};

    const auto sched12 = build_schedule(V{0, 0, 1, 2, 1, 2}, Dims{1, 2});
    const std::vector<SlotCoord> expected{{0, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                          {0, 0, 2}, {0, 1, 1}, {0, 1, 2}};
    for (std::size_t l = 0; l < expected.size(); ++l)
        if (sched12.coord(l) != expected[l]) return {false, "build_schedule M=1 N=2"};

    const auto sched = build_schedule(V{0, 1, 2}, Dims{1, 1});
    const V z{5, 6, 7};
    const auto c = substitute(ColourImage(Dims{1, 1}, V{10, 20, 30}), sched, z);
    if (c.data() != V{15, 51, 108}) return {false, "substitute (10,20,30)"};

    const auto solid_c = substitute(solid_image(Dims{1, 1}, 10), sched, z);
    if (recover_byte_keystream(solid_c, 10, V{0, 1, 2}) != z)
        return {false, "recover_byte_keystream solid-10"};

    return {true, "balance, schedule, substitute and keystream-recovery vectors all exact"};
}

Outcome criterion9_selector_balance() {
    std::mt19937_64 rng(901);
    for (int trial = 0; trial < 100; ++trial) {
        const Dims dims{1 + int(rng() % 24), 1 + int(rng() % 24)};
        const auto key = testsupport::random_test_key(rng);
        const auto mat = derive_all(key, dims);
        std::size_t counts[3] = {0, 0, 0};
        for (std::uint8_t s : mat.selector) ++counts[s];
        if (counts[0] != dims.pixels() || counts[1] != dims.pixels() ||
            counts[2] != dims.pixels()) {
            std::ostringstream detail;
            detail << "unbalanced selector in trial " << trial << " at " << dims.rows << "x"
                   << dims.cols;
            return {false, detail.str()};
        }
    }
    return {true, "100 random keys and sizes, each symbol appears exactly MN times"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"reference-key attack demo (512x512, bit-exact break)", criterion1_reference_break},
        {"query budget (3 probes, 5 chosen images at 512x512)", criterion2_query_budget},
        {"probability bound value and monotonicity", criterion3_probability_bound},
        {"period law for every nonzero difference", criterion4_period_law},
        {"difference progression on solid pairs (100 keys)", criterion5_difference_progression},
        {"selector recovery success rate (1000 keys)", criterion6_selector_recovery_rate},
        {"inverse round-trip suites", criterion7_inverse_suites},
        {"micro-vector equivalence", criterion8_micro_vectors},
        {"keystream balance (100 keys)", criterion9_selector_balance},
    };

    bool all_pass = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        all_pass = all_pass && outcome.pass;
        std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": "
                  << criteria[i].first << " | " << outcome.detail << "\n";
    }
    std::cout << (all_pass ? "acceptance: all criteria passed" : "acceptance: FAILURES above")
              << "\n";
    return all_pass ? 0 : 1;
}
