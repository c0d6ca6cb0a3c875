#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace mcw {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double pi = std::numbers::pi;

inline bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double mean_power(const cvec& x) {
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

// FNV-1a, used for scenario digests and RNG stream derivation.
inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return fnv1a(&v, sizeof(v), h);
}

}  // namespace mcw
