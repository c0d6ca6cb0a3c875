#pragma once

#include <cmath>
#include <cstdint>

#include "mcwave/types.hpp"

namespace mcw {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

// Splittable counter-style generator (splitmix64 core). A (seed,
// stream_id) pair fully determines the draw sequence, so Monte-Carlo
// trials can each own an independent stream and results do not depend
// on thread scheduling.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0)
        : state_(detail::mix64(detail::mix64(seed ^ 0x6a09e667f3bcc909ull) ^
                               detail::mix64(stream_id + 0x9e3779b97f4a7c15ull))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return detail::mix64(state_);
    }

    // Uniform on (0, 1]; never returns 0 so log() below is safe.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal, Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phi = 2.0 * pi * uniform();
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cplx cgaussian(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phi = 2.0 * pi * uniform();
        return {s * r * std::cos(phi), s * r * std::sin(phi)};
    }

    std::uint64_t random_bit() { return next_u64() >> 63; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace mcw
