#pragma once

#include <cassert>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace fnd {

// Seeded generator with hand-rolled draws. std::uniform_*_distribution is
// implementation-defined, which would break the bit-reproducibility
// guarantees; mt19937_64 itself is fully specified.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        assert(bound > 0);
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        std::uint64_t x;
        do {
            x = engine_();
        } while (x < threshold);
        return x % bound;
    }

    // Double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace fnd
