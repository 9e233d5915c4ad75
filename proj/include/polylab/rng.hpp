#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace polylab {

/// Deterministic random source. All randomized operations draw from one of
/// these, seeded explicitly, so runs are reproducible bit-for-bit. Bounded
/// draws use rejection sampling on the raw mt19937_64 stream instead of
/// std::uniform_int_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform value in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform point of F_p^n as raw coordinate values.
    std::vector<std::uint8_t> point(std::uint8_t p, int n) {
        std::vector<std::uint8_t> x(static_cast<std::size_t>(n));
        for (auto& c : x) c = static_cast<std::uint8_t>(below(p));
        return x;
    }

    double unit_real() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace polylab
