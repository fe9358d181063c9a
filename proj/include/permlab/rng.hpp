#pragma once

#include <cstdint>

namespace permlab {

/// Small deterministic generator (splitmix64).  Every randomized operation
/// in the library is a pure function of its explicit 64-bit seed, so the
/// generator must behave identically on every platform; the standard
/// distributions do not guarantee that, this does.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound), unbiased via rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent per-task seed from a master seed and an index.
/// Used by the trial runners so aggregate results are deterministic
/// regardless of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 g(master ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL));
    return g.next();
}

}  // namespace permlab
