#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "mcwave/types.hpp"

namespace mcw {

using BitBlock = std::vector<std::uint8_t>;

// Square QAM constellation with per-axis Gray labeling and unit
// average symbol energy. The first half of each symbol's bits selects
// the I level, the second half the Q level; the all-zero label sits in
// the (+,+) quadrant corner nearest the axes for 4-QAM.
class Constellation {
public:
    static Constellation make(int order) {
        if (order != 4 && order != 16 && order != 64)
            throw std::invalid_argument("Constellation: order must be 4, 16 or 64");
        return Constellation(order);
    }

    int order() const { return order_; }
    int bits_per_symbol() const { return bits_; }
    const cvec& points() const { return points_; }

    cplx point(std::uint32_t label) const { return points_[label]; }

    // Nearest-point hard decision; ties resolve to the smaller label.
    std::uint32_t decide(cplx y) const {
        std::uint32_t best = 0;
        double best_d = std::norm(y - points_[0]);
        for (std::uint32_t m = 1; m < points_.size(); ++m) {
            const double d = std::norm(y - points_[m]);
            if (d < best_d) {
                best_d = d;
                best = m;
            }
        }
        return best;
    }

private:
    explicit Constellation(int order) : order_(order) {
        bits_ = 0;
        for (int m = order; m > 1; m >>= 1) ++bits_;
        const int side = 1 << (bits_ / 2);
        // Per-axis average power of the +/-1, +/-3, ... grid.
        const double axis_power = (side * side - 1) / 3.0;
        const double scale = 1.0 / std::sqrt(2.0 * axis_power);
        points_.resize(order);
        for (std::uint32_t label = 0; label < static_cast<std::uint32_t>(order); ++label) {
            const std::uint32_t gi = label >> (bits_ / 2);
            const std::uint32_t gq = label & (side - 1);
            points_[label] = {axis_level(gi, side) * scale, axis_level(gq, side) * scale};
        }
    }

    // Gray code g -> amplitude; g = 0 maps to the most positive level.
    static double axis_level(std::uint32_t g, int side) {
        std::uint32_t b = g;
        for (std::uint32_t shift = 1; shift < 16; shift <<= 1) b ^= b >> shift;
        return static_cast<double>(side - 1) - 2.0 * static_cast<double>(b);
    }

    int order_;
    int bits_;
    cvec points_;
};

inline cvec qam_map(const BitBlock& bits, const Constellation& c) {
    const int bps = c.bits_per_symbol();
    if (bits.empty() || bits.size() % bps != 0)
        throw std::invalid_argument("qam_map: bit count must be a positive multiple of log2(M)");
    cvec out(bits.size() / bps);
    for (std::size_t s = 0; s < out.size(); ++s) {
        std::uint32_t label = 0;
        for (int b = 0; b < bps; ++b) label = (label << 1) | (bits[s * bps + b] & 1);
        out[s] = c.point(label);
    }
    return out;
}

inline BitBlock qam_demap(const cvec& symbols, const Constellation& c) {
    const int bps = c.bits_per_symbol();
    BitBlock bits(symbols.size() * bps);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const std::uint32_t label = c.decide(symbols[s]);
        for (int b = 0; b < bps; ++b)
            bits[s * bps + b] = static_cast<std::uint8_t>((label >> (bps - 1 - b)) & 1);
    }
    return bits;
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Exact Gray-coded square-QAM bit error probability in AWGN
// (sum-of-Q-functions form).
inline double theoretical_ber(const Constellation& c, double ebn0_db) {
    const int m = c.order();
    const int bits = c.bits_per_symbol();
    const int side = 1 << (bits / 2);
    const int axis_bits = bits / 2;
    const double gamma_b = db_to_lin(ebn0_db);

    double total = 0.0;
    for (int k = 1; k <= axis_bits; ++k) {
        const int terms = static_cast<int>((1.0 - std::pow(2.0, -k)) * side);
        double pk = 0.0;
        for (int i = 0; i < terms; ++i) {
            const int f = (i * (1 << (k - 1))) / side;
            const double sign = (f % 2 == 0) ? 1.0 : -1.0;
            const double weight = (1 << (k - 1)) - std::floor(static_cast<double>(i) * (1 << (k - 1)) / side + 0.5);
            pk += sign * weight * q_function((2.0 * i + 1.0) * std::sqrt(3.0 * bits * gamma_b / (m - 1.0)));
        }
        total += pk * 2.0 / side;
    }
    return total / axis_bits;
}

}  // namespace mcw
