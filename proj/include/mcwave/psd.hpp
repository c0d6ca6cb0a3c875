#pragma once

#include <stdexcept>

#include "mcwave/fft.hpp"
#include "mcwave/types.hpp"

namespace mcw {

// Welch-averaged periodogram, Hann window. Output has segment_len bins
// in natural FFT order (DC first), linear power units, scaled so that
// sum(psd) * (1/segment_len) equals the mean squared magnitude of x.
inline std::vector<double> welch_psd(const cvec& x, std::size_t segment_len, std::size_t overlap) {
    if (!is_pow2(segment_len)) throw std::invalid_argument("welch_psd: segment length must be a power of two");
    if (segment_len > x.size()) throw std::invalid_argument("welch_psd: input shorter than one segment");
    if (overlap >= segment_len) throw std::invalid_argument("welch_psd: overlap must be smaller than segment length");

    std::vector<double> window(segment_len);
    for (std::size_t i = 0; i < segment_len; ++i)
        window[i] = 0.5 * (1.0 - std::cos(2.0 * pi * i / segment_len));

    const std::size_t hop = segment_len - overlap;
    std::vector<double> acc(segment_len, 0.0);
    std::size_t nseg = 0;
    cvec seg(segment_len);
    for (std::size_t start = 0; start + segment_len <= x.size(); start += hop, ++nseg) {
        for (std::size_t i = 0; i < segment_len; ++i) seg[i] = x[start + i] * window[i];
        fft_inplace(seg, false);
        for (std::size_t i = 0; i < segment_len; ++i) acc[i] += std::norm(seg[i]);
    }
    for (auto& v : acc) v /= static_cast<double>(nseg);

    double total = 0.0;
    for (double v : acc) total += v;
    const double target = mean_power(x) * static_cast<double>(segment_len);
    if (total > 0.0) {
        const double scale = target / total;
        for (auto& v : acc) v *= scale;
    }
    return acc;
}

}  // namespace mcw
