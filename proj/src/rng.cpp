#include "convqa/rng.hpp"

#include <limits>
#include <stdexcept>

#include "convqa/text.hpp"

namespace convqa {

std::size_t Rng::uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    // rejection sampling over the largest multiple of n
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % range);
    std::uint64_t r;
    do {
        r = next();
    } while (r >= limit);
    return static_cast<std::size_t>(r % range);
}

Rng Rng::derive(std::string_view tag) const {
    return Rng(fnv1a64(tag, state_ ^ 0x5851f42d4c957f2dull));
}

} // namespace convqa
