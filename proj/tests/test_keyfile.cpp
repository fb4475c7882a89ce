#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "chaosbreak/ekeyfile.hpp"
#include "chaosbreak/keyfile.hpp"
#include "support.hpp"

using namespace chaosbreak;

TEST_CASE("key text round trip is bit-exact") {
    std::mt19937_64 rng(301);
    for (int trial = 0; trial < 50; ++trial) {
        const auto key = generate_key(rng());
        const auto parsed = parse_key_text(format_key_text(key));
        REQUIRE(parsed == key);
    }
}

TEST_CASE("key fields may appear in any order") {
    const auto key = parse_key_text(
        "mu0s=3.999999\nm2=2000\nx0s=0.567891234567\nmu0=4.0\nx0=0.123456789764\nm1=1000\n");
    REQUIRE(key.m1 == 1000);
    REQUIRE(key.m2 == 2000);
    REQUIRE(key.x0 == 0.123456789764);
    REQUIRE(key.mu0 == 4.0);
    REQUIRE(key.x0s == 0.567891234567);
    REQUIRE(key.mu0s == 3.999999);
}

TEST_CASE("key text parse errors name the field") {
    const std::string base =
        "m1=1000\nx0=0.123456789764\nmu0=4.0\nm2=2000\nx0s=0.567891234567\nmu0s=3.999999\n";

    SECTION("missing field") {
        try {
            parse_key_text("m1=1000\nx0=0.5\nmu0=4.0\nm2=2000\nx0s=0.4\n");
            FAIL("expected InvalidKey");
        } catch (const InvalidKey& e) {
            REQUIRE(std::string(e.what()).find("mu0s") != std::string::npos);
        }
    }
    SECTION("duplicate field") {
        REQUIRE_THROWS_AS(parse_key_text(base + "m1=7\n"), InvalidKey);
    }
    SECTION("unknown field") {
        REQUIRE_THROWS_AS(parse_key_text(base + "zz=1\n"), InvalidKey);
    }
    SECTION("bad number") {
        REQUIRE_THROWS_AS(parse_key_text("m1=abc\nx0=0.5\nmu0=4.0\nm2=2000\nx0s=0.4\nmu0s=3.9\n"),
                          InvalidKey);
    }
    SECTION("value out of range") {
        REQUIRE_THROWS_AS(parse_key_text("m1=1000\nx0=1.5\nmu0=4.0\nm2=2000\nx0s=0.4\nmu0s=3.9\n"),
                          InvalidKey);
    }
}

TEST_CASE("generate_key is deterministic per seed and always valid") {
    REQUIRE(format_key_text(generate_key(42)) == format_key_text(generate_key(42)));
    REQUIRE(format_key_text(generate_key(42)) != format_key_text(generate_key(43)));
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto key = generate_key(seed);
        REQUIRE_NOTHROW(validate(key));
        REQUIRE(key.m1 >= 500);
        REQUIRE(key.m1 <= 5000);
        REQUIRE(key.x0 > 0.01);
        REQUIRE(key.x0 < 0.99);
        REQUIRE(key.mu0 > 3.57);
        REQUIRE(key.mu0 <= 4.0);
    }
    REQUIRE_NOTHROW(validate(generate_key()));  // entropy-seeded
}

TEST_CASE("equivalent key file round trip") {
    std::mt19937_64 rng(313);
    const Dims dims{5, 7};
    const auto key = testsupport::random_test_key(rng);
    KeyedOracle oracle(key, dims);
    const auto ek = run_attack(oracle, DifferenceParams::make(127, 0));

    const auto stem = std::filesystem::temp_directory_path() / "chaosbreak_ekey_test";
    write_equivalent_key(stem, ek);
    const auto back = read_equivalent_key(stem);
    REQUIRE(back.dims == ek.dims);
    REQUIRE(back.yhat == ek.yhat);
    REQUIRE(back.zhat == ek.zhat);
    REQUIRE(back.posmap == ek.posmap);

    SECTION("corrupt magic is rejected") {
        auto bytes = read_file(std::filesystem::path(stem) += ".yhat");
        bytes[0] = 'X';
        write_file_atomic(std::filesystem::path(stem) += ".yhat", bytes);
        REQUIRE_THROWS_AS(read_equivalent_key(stem), EkeyFormatError);
    }
    SECTION("corrupt posmap is rejected") {
        auto bytes = read_file(std::filesystem::path(stem) += ".posmap");
        bytes[8] = std::uint8_t(bytes[8] + 1);
        bytes[12] = bytes[8];  // duplicate first entry into the second
        bytes[13] = bytes[9];
        bytes[14] = bytes[10];
        bytes[15] = bytes[11];
        write_file_atomic(std::filesystem::path(stem) += ".posmap", bytes);
        REQUIRE_THROWS_AS(read_equivalent_key(stem), NotABijection);
    }
}
