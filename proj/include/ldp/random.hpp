#ifndef LDP_RANDOM_HPP
#define LDP_RANDOM_HPP

#include <bit>
#include <cstdint>
#include <random>

#include "ldp/errors.hpp"

namespace ldp {

/// Deterministic random source. std::uniform_*_distribution is
/// implementation-defined, so the draw algorithms live here: identical
/// seeds give identical streams on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform integer in [lo, hi], both inclusive. Masked rejection
    /// sampling, exactly uniform.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw InvariantError("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next_u64()); // full 64-bit range
        const std::uint64_t mask = span == 1 ? 0 : (std::bit_ceil(span) - 1);
        for (;;) {
            const std::uint64_t v = next_u64() & mask;
            if (v < span) return lo + static_cast<std::int64_t>(v);
        }
    }

    /// Uniform double in [lo, hi) with 53 random mantissa bits.
    double uniform_real(double lo, double hi) {
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    bool bernoulli(double p) { return uniform_real(0.0, 1.0) < p; }

private:
    std::mt19937_64 eng_;
};

/// Stable derivation of per-cell seeds for experiment fan-out
/// (splitmix64 finalizer over the combined words).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace ldp

#endif // LDP_RANDOM_HPP
