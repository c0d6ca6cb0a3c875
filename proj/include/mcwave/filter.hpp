#pragma once

#include <cmath>
#include <stdexcept>

#include "mcwave/types.hpp"

namespace mcw {

// Prototype subband filter: complex impulse response of odd length,
// normalized to unit energy.
struct ProtoFilter {
    cvec taps;
    int length() const { return static_cast<int>(taps.size()); }
};

inline cvec linear_convolve(const cvec& x, const ProtoFilter& h) {
    const std::size_t nx = x.size();
    const std::size_t nh = h.taps.size();
    cvec y(nx + nh - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nh; ++j) y[i + j] += x[i] * h.taps[j];
    return y;
}

namespace detail {

// Chebyshev polynomial T_n evaluated for any real argument.
inline double cheb_poly(int n, double x) {
    if (std::abs(x) <= 1.0) return std::cos(n * std::acos(x));
    const double t = std::cosh(n * std::acosh(std::abs(x)));
    return (x < -1.0 && (n % 2)) ? -t : t;
}

}  // namespace detail

// Dolph-Chebyshev window of odd length L with the given sidelobe
// attenuation (dB below mainlobe, amplitude convention). Computed by
// frequency sampling and an explicit inverse DFT; L is small so the
// O(L^2) sum is fine.
inline std::vector<double> chebyshev_window(int len, double sidelobe_atten_db) {
    if (len <= 0 || len % 2 == 0) throw std::invalid_argument("chebyshev_window: length must be odd and positive");
    if (sidelobe_atten_db <= 0.0) throw std::invalid_argument("chebyshev_window: attenuation must be positive");
    if (len == 1) return {1.0};

    const int order = len - 1;
    const double r = std::pow(10.0, sidelobe_atten_db / 20.0);
    const double beta = std::cosh(std::acosh(r) / order);

    std::vector<double> big_w(len);
    for (int m = 0; m < len; ++m)
        big_w[m] = detail::cheb_poly(order, beta * std::cos(pi * m / len));

    const int half = order / 2;
    std::vector<double> w(len);
    for (int n = 0; n < len; ++n) {
        double acc = 0.0;
        for (int m = 0; m < len; ++m)
            acc += big_w[m] * std::cos(2.0 * pi * m * (n - half) / len);
        w[n] = acc / len;
    }
    const double peak = w[half];
    for (auto& v : w) v /= peak;
    return w;
}

// Dolph-Chebyshev prototype modulated to center_norm_freq
// (cycles/sample) and normalized to unit energy.
inline ProtoFilter chebyshev_filter(int len, double sidelobe_atten_db, double center_norm_freq) {
    if (center_norm_freq < 0.0 || center_norm_freq >= 1.0)
        throw std::invalid_argument("chebyshev_filter: center frequency must be in [0, 1)");
    const std::vector<double> w = chebyshev_window(len, sidelobe_atten_db);
    ProtoFilter f;
    f.taps.resize(len);
    double energy = 0.0;
    for (int i = 0; i < len; ++i) {
        f.taps[i] = w[i] * std::polar(1.0, 2.0 * pi * center_norm_freq * i);
        energy += std::norm(f.taps[i]);
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (auto& t : f.taps) t *= scale;
    return f;
}

}  // namespace mcw
