#pragma once

#include <cstdint>
#include <cmath>

namespace renewal {

// Counter-based generator: each draw hashes (key, counter), so a stream is a
// pure function of (seed, stream_id, index). Streams for distinct paths are
// independent of thread scheduling, which keeps parallel Monte Carlo bitwise
// reproducible.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))), counter_(0) {}

    std::uint64_t next_u64() {
        std::uint64_t v = key_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
        return mix(v);
    }

    // Uniform on (0,1]; never returns 0 so log(u) is always finite.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_exponential(double rate) {
        return -std::log(next_uniform()) / rate;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace renewal
