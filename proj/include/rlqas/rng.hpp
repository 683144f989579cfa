#pragma once

#include <cmath>
#include <cstdint>

namespace rlqas {

// SplitMix64, used as the single RNG for the whole artifact. It is a
// counter-based generator (output i is a fixed mix of seed + i*gamma), so a
// stream is fully determined by its seed and draw index; independent streams
// for parallel work are derived by hashing a stream id into the seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Child stream with its own seed; deterministic in (seed, stream).
    static SplitMix64 derive(std::uint64_t seed, std::uint64_t stream) {
        return SplitMix64(mix(seed + 0x9E3779B97F4A7C15ull * (stream + 1)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n) via rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~0ull) / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller; the second draw of each pair is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) {
        state_ = s;
        have_cached_ = false;
    }

private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace rlqas
