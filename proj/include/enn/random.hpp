#pragma once

// Seeded generator with platform-independent draws. std::uniform_*_distribution
// output differs between standard libraries; these conversions do not.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace enn {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Integer in [0, bound). Modulo bias is below 2^-40 for the sizes used here.
    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace enn
