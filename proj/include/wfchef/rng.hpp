#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace wfchef {

// Seeded generator whose output sequence is identical on every platform.
// std::mt19937_64 is fully specified by the standard; the standard
// distributions are not, so the few draws needed here are written out.
class rng {
public:
    explicit rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, n); n > 0.
    std::size_t uniform_index(std::size_t n);

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();

    // Index drawn with probability proportional to weights[i]. At least
    // one weight must be positive.
    std::size_t weighted_index(std::span<const double> weights);

private:
    std::mt19937_64 engine_;
};

// Derives an independent 64-bit seed from a parent seed and a label.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

} // namespace wfchef
