#pragma once

#include <cstdint>
#include <random>

namespace sbe {

// Mixes a master seed and a stream index into an independent child seed
// (splitmix64 finalizer). Campaigns, tuners and fitness evaluations derive
// their per-run streams through this, so any single run is replayable from
// (master, index) without executing the runs before it.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seeded random source used by all stochastic code. Wraps mt19937_64 and
// pins the bounded-int / bool / unit-double draws to our own bit recipes,
// so identical seeds give identical results on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [lo, hi], both inclusive. Unbiased.
    int next_int(int lo, int hi) {
        const std::uint64_t range =
            static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) -
                                       static_cast<std::int64_t>(lo)) + 1;
        std::uint64_t x, r;
        do {
            x = next_u64();
            r = x % range;
        } while (x - r > std::uint64_t(0) - range);
        return static_cast<int>(lo + static_cast<std::int64_t>(r));
    }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    // Uniform double in [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace sbe
