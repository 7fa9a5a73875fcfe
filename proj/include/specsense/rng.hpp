#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace specsense {

// Deterministic stream derivation: every consumer of randomness owns a
// substream keyed by (master_seed, tag chain). Streams derived from the
// same key are bit-identical across runs, platforms and thread counts.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = master;
    (void)splitmix64(s);
    for (std::uint64_t t : tags) {
        s ^= t + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        (void)splitmix64(s);
    }
    return splitmix64(s);
}

// Substream tags used throughout the simulation harness.
enum class StreamTag : std::uint64_t {
    ensemble = 1,
    ground_truth = 2,
    observations = 3,
    matrix = 4,
};

// Wraps std::mt19937_64 (bit-exact engine per the standard) and applies
// explicit transforms instead of std:: distributions, which are not
// reproducible across library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    RngStream(std::uint64_t master, std::initializer_list<std::uint64_t> tags)
        : engine_(derive_seed(master, tags)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Mean-theta exponential draw via inverse CDF.
    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

    bool bernoulli(double p_true) { return uniform01() < p_true; }

private:
    std::mt19937_64 engine_;
};

}  // namespace specsense
