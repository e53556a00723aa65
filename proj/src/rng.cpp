#include "wfchef/rng.hpp"

#include <limits>

#include "wfchef/digest.hpp"
#include "wfchef/error.hpp"

namespace wfchef {

std::size_t rng::uniform_index(std::size_t n) {
    if (n == 0) throw invalid_argument_error("uniform_index over an empty range");
    const std::uint64_t range = n;
    // rejection sampling keeps the draw unbiased
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % range);
}

double rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t rng::weighted_index(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw invalid_argument_error("weighted_index with no positive weight");
    const double target = uniform01() * total;
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        cumulative += weights[i];
        last_positive = i;
        if (target < cumulative) return i;
    }
    return last_positive; // rounding at the upper edge
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    return digest_builder{}.tag('S').u64(seed).text(label).finish().prefix64();
}

} // namespace wfchef
