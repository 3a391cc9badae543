#pragma once

#include <cmath>
#include <cstdint>

namespace growth::rng {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so replicates and event streams never share
// state and any event can be regenerated in isolation.

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

// Uniform on (0,1]; never returns 0 so -log is finite.
inline double u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>((draw(seed, stream, counter) >> 11) + 1) * 0x1.0p-53;
}

inline double exponential(double rate, std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter) {
    return -std::log(u01(seed, stream, counter)) / rate;
}

// Labelled sub-seed derivation (replicate seeds, thinning streams, ...).
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t label, std::uint64_t index) {
    return draw(seed, label, index);
}

inline constexpr std::uint64_t kReplicateLabel = 0x7265706c69636174ull;  // "replicat"
inline constexpr std::uint64_t kThinningLabel = 0x7468696e6e696e67ull;   // "thinning"
inline constexpr std::uint64_t kInitLabel = 0x696e697469616cull;         // "initial"

}  // namespace growth::rng
