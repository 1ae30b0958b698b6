#pragma once

#include <cstdint>

namespace loglessraft {

// splitmix64: tiny, portable, and stable across platforms. The standard
// <random> distributions are implementation-defined, which would break the
// bit-identical-output contract, so everything that needs randomness draws
// from this.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi] (modulo bias is irrelevant here; determinism is
    // the contract, not statistical quality).
    std::uint64_t bounded(std::uint64_t lo, std::uint64_t hi) {
        return lo + (hi > lo ? next() % (hi - lo + 1) : 0);
    }

private:
    std::uint64_t state_;
};

}  // namespace loglessraft
