// Command-line front end: key generation, the cipher itself, and the
// chosen-plaintext attack demo with an in-process oracle.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "chaosbreak/attack.hpp"
#include "chaosbreak/cipher.hpp"
#include "chaosbreak/ekeyfile.hpp"
#include "chaosbreak/io.hpp"
#include "chaosbreak/keyfile.hpp"
#include "chaosbreak/ppm.hpp"

namespace {

using nlohmann::json;

chaosbreak::Dims parse_dims(const std::string& text) {
    const std::size_t x = text.find_first_of("xX");
    if (x == std::string::npos)
        throw chaosbreak::DimensionMismatch("--dims must look like MxN, e.g. 512x512");
    int rows = 0, cols = 0;
    try {
        rows = std::stoi(text.substr(0, x));
        cols = std::stoi(text.substr(x + 1));
    } catch (const std::exception&) {
        throw chaosbreak::DimensionMismatch("--dims must look like MxN, e.g. 512x512");
    }
    if (rows < 1 || cols < 1 || rows > 65535 || cols > 65535)
        throw chaosbreak::DimensionMismatch("--dims out of range");
    return chaosbreak::Dims{rows, cols};
}

chaosbreak::SecretKey load_key(const std::string& path) {
    const auto bytes = chaosbreak::read_file(path);
    return chaosbreak::parse_key_text(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

int cmd_keygen(const std::string& out, std::optional<std::uint64_t> seed) {
    const chaosbreak::SecretKey key = chaosbreak::generate_key(seed);
    chaosbreak::write_file_atomic(out, chaosbreak::format_key_text(key));
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_encrypt(const std::string& key_path, const std::string& in, const std::string& out,
                bool decrypt_mode) {
    const chaosbreak::SecretKey key = load_key(key_path);
    const chaosbreak::ColourImage img = chaosbreak::read_ppm_file(in);
    const chaosbreak::ColourImage result =
        decrypt_mode ? chaosbreak::decrypt(img, key) : chaosbreak::encrypt(img, key);
    chaosbreak::write_ppm_file(out, result);
    std::cout << "wrote " << out << " (" << img.dims().rows << "x" << img.dims().cols << ")\n";
    return 0;
}

json stage_entry(const char* status, double ms) {
    return json{{"status", status}, {"wall_ms", ms}};
}

int cmd_attack(const std::string& key_path, const std::string& dims_str, int d1, int d2,
               std::string report_path, const std::string& ekey_stem) {
    const chaosbreak::SecretKey key = load_key(key_path);
    const chaosbreak::Dims dims = parse_dims(dims_str);
    if (report_path.empty())
        report_path = ekey_stem + ".report.json";

    json report;
    report["dims"] = {{"rows", dims.rows}, {"cols", dims.cols}};
    report["ambiguity_events"] = json::array();

    std::vector<std::pair<int, int>> plan{{d1, d2}};
    if (d1 != 63 || d2 != 0)
        plan.emplace_back(63, 0);  // one retry with a different odd difference

    for (std::size_t attempt = 0; attempt < plan.size(); ++attempt) {
        const auto [a1, a2] = plan[attempt];
        const auto params =
            chaosbreak::DifferenceParams::make(std::uint8_t(a1), std::uint8_t(a2));
        chaosbreak::KeyedOracle oracle(key, dims);
        chaosbreak::AttackTrace trace;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const chaosbreak::EquivalentKey ek = chaosbreak::run_attack(oracle, params, &trace);
            const double total_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();

            chaosbreak::write_equivalent_key(ekey_stem, ek);
            report["difference"] = {{"d1", a1},
                                    {"d2", a2},
                                    {"D", params.d},
                                    {"period", params.period}};
            report["attempts"] = attempt + 1;
            report["query_count"] = oracle.query_count();
            report["chosen_images"] = oracle.query_count();
            report["stages"] = {
                {"solid_queries", stage_entry("ok", trace.solid_queries_ms)},
                {"selector", stage_entry("ok", trace.selector_ms)},
                {"keystream", stage_entry("ok", trace.keystream_ms)},
                {"probe_queries", stage_entry("ok", trace.probe_queries_ms)},
                {"position_map", stage_entry("ok", trace.position_map_ms)},
            };
            report["total_wall_ms"] = total_ms;
            report["outputs"] = {{"yhat", ekey_stem + ".yhat"},
                                 {"zhat", ekey_stem + ".zhat"},
                                 {"posmap", ekey_stem + ".posmap"},
                                 {"report", report_path}};
            chaosbreak::write_file_atomic(report_path, report.dump(2) + "\n");

            std::cout << "attack succeeded: " << oracle.query_count()
                      << " chosen images, d=(" << a1 << "," << a2 << "), "
                      << total_ms << " ms\n"
                      << "wrote " << ekey_stem << ".{yhat,zhat,posmap} and " << report_path
                      << "\n";
            return 0;
        } catch (const chaosbreak::AmbiguousChannel& e) {
            report["ambiguity_events"].push_back({{"attempt", attempt + 1},
                                                  {"d1", a1},
                                                  {"d2", a2},
                                                  {"step", e.step},
                                                  {"candidates", e.candidates}});
            std::cerr << "attempt " << attempt + 1 << " with d=(" << a1 << "," << a2
                      << "): " << e.what() << "\n";
        }
    }

    report["stages"] = {
        {"selector", stage_entry("failed", 0.0)},
        {"keystream", stage_entry("not_run", 0.0)},
        {"position_map", stage_entry("not_run", 0.0)},
    };
    chaosbreak::write_file_atomic(report_path, report.dump(2) + "\n");
    std::cerr << "attack failed: ambiguous channel in every attempt (see " << report_path
              << ")\n";
    return 1;
}

int cmd_break(const std::string& ekey_stem, const std::string& in, const std::string& out) {
    const chaosbreak::EquivalentKey ek = chaosbreak::read_equivalent_key(ekey_stem);
    const chaosbreak::ColourImage cipher = chaosbreak::read_ppm_file(in);
    chaosbreak::write_ppm_file(out, chaosbreak::break_ciphertext(cipher, ek));
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chosen-plaintext break of a chaos-based colour-image cipher"};
    app.require_subcommand(1);

    std::string key_path, in_path, out_path, dims_str, report_path, ekey_stem;
    int d1 = 127, d2 = 0;
    std::optional<std::uint64_t> seed;

    auto* keygen = app.add_subcommand("keygen", "generate a random secret key file");
    keygen->add_option("--out", out_path, "key file to write")->required();
    keygen->add_option("--seed", seed, "seed for a reproducible key");

    auto* encrypt = app.add_subcommand("encrypt", "encrypt a PPM image");
    encrypt->add_option("--key", key_path, "secret key file")->required();
    encrypt->add_option("--in", in_path, "plain image (binary PPM)")->required();
    encrypt->add_option("--out", out_path, "cipher image to write")->required();

    auto* decrypt = app.add_subcommand("decrypt", "decrypt a PPM image");
    decrypt->add_option("--key", key_path, "secret key file")->required();
    decrypt->add_option("--in", in_path, "cipher image (binary PPM)")->required();
    decrypt->add_option("--out", out_path, "plain image to write")->required();

    auto* attack = app.add_subcommand(
        "attack", "run the chosen-plaintext attack against an in-process oracle");
    attack->add_option("--key", key_path, "secret key file (plays the hidden oracle key)")
        ->required();
    attack->add_option("--dims", dims_str, "image dimensions MxN, e.g. 512x512")->required();
    attack->add_option("--d1", d1, "first solid value (default 127)")
        ->check(CLI::Range(0, 255));
    attack->add_option("--d2", d2, "second solid value (default 0)")
        ->check(CLI::Range(0, 255));
    attack->add_option("--report", report_path, "JSON report path (default <out>.report.json)");
    attack->add_option("--out", ekey_stem, "output stem for the equivalent-key files")
        ->required();

    auto* brk = app.add_subcommand("break", "decrypt a ciphertext with an equivalent key");
    brk->add_option("--key", ekey_stem, "equivalent-key stem written by 'attack'")->required();
    brk->add_option("--in", in_path, "cipher image (binary PPM)")->required();
    brk->add_option("--out", out_path, "recovered image to write")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (keygen->parsed()) return cmd_keygen(out_path, seed);
        if (encrypt->parsed()) return cmd_encrypt(key_path, in_path, out_path, false);
        if (decrypt->parsed()) return cmd_encrypt(key_path, in_path, out_path, true);
        if (attack->parsed())
            return cmd_attack(key_path, dims_str, d1, d2, report_path, ekey_stem);
        if (brk->parsed()) return cmd_break(ekey_stem, in_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
