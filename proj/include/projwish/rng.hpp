// Splittable counter-style random stream: a Weyl sequence with a per-stream
// odd increment, finalized by the splitmix64 mixer. Identical (seed, stream)
// pairs reproduce identical sample sequences; distinct stream ids give
// independent substreams without coordination.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "projwish/field.hpp"

namespace projwish {

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        const std::uint64_t h = mix64(seed);
        state_ = mix64(h ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
        gamma_ = mix64(h + stream) | 1ULL;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() {
        state_ += gamma_;
        return mix64(state_);
    }

    /// Uniform double in [0, 1).
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the pair is consumed in a fixed
    /// order so the sequence is deterministic.
    double next_gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        // u1 in (0, 1] keeps the log finite.
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    /// Standard scalar for the given field: N(0,1) when real, circularly
    /// symmetric complex normal with E|z|^2 = 1 when complex.
    Scalar next_standard_scalar(Field field) {
        if (field == Field::Real) return Scalar(next_gaussian(), 0.0);
        const double re = next_gaussian();
        const double im = next_gaussian();
        return Scalar(re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0);
    }

    static std::uint64_t mix64(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t state_ = 0;
    std::uint64_t gamma_ = 1;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace projwish
