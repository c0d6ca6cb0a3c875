#pragma once

#include <stdexcept>
#include <unordered_map>

#include "mcwave/types.hpp"

namespace mcw {

namespace detail {

// Twiddle tables are cached per transform size; tables are small
// (N <= a few thousand here) and the harness hits the same sizes
// millions of times.
inline const cvec& twiddles(std::size_t n) {
    thread_local std::unordered_map<std::size_t, cvec> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    cvec w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = std::polar(1.0, -2.0 * pi * static_cast<double>(k) / static_cast<double>(n));
    return cache.emplace(n, std::move(w)).first->second;
}

inline void bit_reverse_permute(cvec& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

}  // namespace detail

// In-place radix-2 transform. Forward carries no prefactor, inverse
// carries 1/N, so ifft(fft(x)) == x and a unit-amplitude subcarrier
// round-trips at unit magnitude.
inline void fft_inplace(cvec& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;
    detail::bit_reverse_permute(a);
    const cvec& w = detail::twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx tw = w[k * stride];
                if (inverse) tw = std::conj(tw);
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * tw;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& v : a) v *= scale;
    }
}

inline cvec dft(const cvec& x, bool inverse) {
    cvec a = x;
    fft_inplace(a, inverse);
    return a;
}

}  // namespace mcw
