#ifndef FROC_RNG_HPP
#define FROC_RNG_HPP

#include <cstdint>

namespace froc {

// SplitMix64. Small, fast, and identical on every platform, unlike the
// distributions in <random>. Used both as a sequential generator and as a
// stateless counter-based hash for per-sample randomness.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), a multiple of 2^-53. Note 1 - u is then
    // exact, which keeps complements of rates free of rounding.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Stateless draw for sample `id` under `seed`: order-independent, so batch
// evaluation parallelizes without changing results.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t id) {
    SplitMix64 g(seed ^ (id * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
    g.next();
    return g.next();
}

inline double uniform_at(std::uint64_t seed, std::uint64_t id) {
    return static_cast<double>(mix_seed(seed, id) >> 11) * 0x1.0p-53;
}

} // namespace froc

#endif
