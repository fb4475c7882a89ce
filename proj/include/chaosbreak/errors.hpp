#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaosbreak {

// Chaotic orbit left the open interval (0,1); the keystream would degenerate.
struct DegenerateOrbit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidKey : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDifference : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Selector recovery found a candidate set of size != 1 at step `step`
// (the period-aliasing event). Carries the step for diagnosis and retry.
struct AmbiguousChannel : std::runtime_error {
    std::size_t step;
    std::vector<int> candidates;

    AmbiguousChannel(std::size_t l, std::vector<int> cands)
        : std::runtime_error("ambiguous channel at step " + std::to_string(l) +
                             " (" + std::to_string(cands.size()) + " candidates)"),
          step(l),
          candidates(std::move(cands)) {}
};

// Decoded position ids do not form a permutation: wrong selector/keystream
// or a mismatched oracle.
struct NotABijection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PpmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedHeader : PpmError {
    using PpmError::PpmError;
};
struct UnsupportedMaxval : PpmError {
    using PpmError::PpmError;
};
struct TruncatedPayload : PpmError {
    using PpmError::PpmError;
};

struct EkeyFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace chaosbreak
