#pragma once

#include <cstdint>

namespace gwlab {

// Counter-based 64-bit generator: output n is mix(seed + n*gamma) with the
// splitmix64 finalizer. Streams are pure functions of (seed, counter), so
// replicas seeded with derive_stream(master, index) are reproducible across
// platforms and independent of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(seed), counter_(0) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Decorrelated seed for the index-th parallel stream of a master seed.
    static std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
        return mix(master ^ mix(index + 0x632be59bd9b4e019ULL));
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    // Uniform on the open interval (0, 1); never returns an exact endpoint,
    // so logarithms of the result are always finite.
    double next_open01() { return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52; }

    // Uniform on [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1. Rejection keeps it unbiased.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

// Standard normal via Marsaglia's polar method (exact rejection sampler).
double sample_normal(Rng& rng);

// Gamma(shape, scale) via Marsaglia-Tsang, exact for all shape > 0.
double sample_gamma(Rng& rng, double shape, double scale);

// Poisson(mean): inversion by multiplication for small means, Hormann's
// transformed rejection (PTRS) otherwise. Exact sampler for mean >= 0.
std::int64_t sample_poisson(Rng& rng, double mean);

// Geometric on {0,1,2,...} with success probability q: P(k) = q(1-q)^k.
std::int64_t sample_geometric(Rng& rng, double q);

// Negative binomial: number of failures before the r-th success, success
// probability q. Sampled through the gamma-Poisson mixture, exact in law.
std::int64_t sample_negative_binomial(Rng& rng, double r, double q);

}  // namespace gwlab
