#pragma once

#include <cstdint>
#include <string_view>

namespace convqa {

// splitmix64 generator. Used instead of <random> engines so seeded example
// streams are byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Unbiased draw in [0, n); n must be > 0.
    std::size_t uniform_index(std::size_t n);

    // [0, 1)
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Independent stream for a named sub-purpose of the same seed.
    Rng derive(std::string_view tag) const;

private:
    std::uint64_t state_;
};

} // namespace convqa
