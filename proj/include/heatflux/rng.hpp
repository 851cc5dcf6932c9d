// rng.hpp — Counter-style splittable RNG streams for reproducible sampling
//
// Each trajectory draws from its own stream keyed by (master_seed, domain,
// index), so integer tallies merge order-independently and parallel runs
// reproduce serial ones bit for bit.

#pragma once

#include <cmath>
#include <cstdint>

namespace heatflux {

// SplitMix64 output function (Steele/Lea/Flood).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RngStream {
public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit mantissa
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double low, double high) {
        return low + (high - low) * uniform();
    }

    // exponential waiting time with the given total rate
    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }

private:
    std::uint64_t state_;
};

// Deterministic stream for (master_seed, domain, index). Domains separate
// unrelated uses of the same master seed (per-start-state batches, heat
// sampling, model generation).
inline RngStream make_stream(std::uint64_t master_seed, std::uint64_t domain,
                             std::uint64_t index) {
    return RngStream(mix64(master_seed ^ mix64(domain ^ mix64(index))));
}

}  // namespace heatflux
