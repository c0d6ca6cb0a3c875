#pragma once

#include <optional>
#include <stdexcept>

#include "mcwave/psd.hpp"
#include "mcwave/rng.hpp"
#include "mcwave/uplink.hpp"
#include "mcwave/waveform.hpp"

namespace mcw {

enum class OffsetKind { Time, Freq };
enum class CombineKind { Plain, PccNoWeight, PccWeight };

// Magnitudes |Y_{l,k}| (or |Z_{l',k'}|) for a unit input on column k.
// The complex-valued transfer is retained so PCC combining can be done
// in the complex domain.
struct InterferenceMatrix {
    int dim = 0;
    OffsetKind offset_kind = OffsetKind::Time;
    CombineKind combine = CombineKind::Plain;
    double offset = 0.0;
    std::vector<double> magnitudes;      // dim x dim, row-major, entry (l, k)
    std::vector<cplx> complex_entries;   // same layout

    double at(int l, int k) const { return magnitudes[static_cast<std::size_t>(l) * dim + k]; }
    cplx cat(int l, int k) const { return complex_entries[static_cast<std::size_t>(l) * dim + k]; }
};

namespace detail {

inline InterferenceMatrix from_complex(int n, OffsetKind okind, double offset, std::vector<cplx> m) {
    InterferenceMatrix out;
    out.dim = n;
    out.offset_kind = okind;
    out.offset = offset;
    out.complex_entries = std::move(m);
    out.magnitudes.resize(out.complex_entries.size());
    for (std::size_t i = 0; i < out.complex_entries.size(); ++i)
        out.magnitudes[i] = std::abs(out.complex_entries[i]);
    return out;
}

}  // namespace detail

// Closed-form per-subcarrier transfer for a receiver window offset of p
// samples: Y_{l,k} = (1/N) exp(j2 pi k p / N) sum_{n=0}^{N-1-p}
// exp(j2 pi n (k-l) / N). Geometric series off the diagonal, (N-p)/N on
// it.
inline InterferenceMatrix ici_time(int n, int p) {
    if (p < 0 || p >= n) throw std::invalid_argument("ici_time: need 0 <= p < N");
    std::vector<cplx> m(static_cast<std::size_t>(n) * n);
    for (int l = 0; l < n; ++l) {
        for (int k = 0; k < n; ++k) {
            cplx sum;
            if (k == l) {
                sum = cplx{static_cast<double>(n - p), 0.0};
            } else {
                const cplx ratio = std::polar(1.0, 2.0 * pi * (k - l) / n);
                const cplx num = 1.0 - std::polar(1.0, 2.0 * pi * (k - l) * (n - p) / static_cast<double>(n));
                sum = num / (1.0 - ratio);
            }
            m[static_cast<std::size_t>(l) * n + k] = std::polar(1.0, 2.0 * pi * k * p / n) * sum / static_cast<double>(n);
        }
    }
    return detail::from_complex(n, OffsetKind::Time, static_cast<double>(p) / n, std::move(m));
}

// Closed-form transfer for a normalized frequency offset:
// Y_{l,k} = (1/N) exp(j theta0) sum_{n=0}^{N-1}
// exp(j2 pi n (k-l+dfT) / N) — a Dirichlet kernel in (k-l+dfT).
inline InterferenceMatrix ici_freq(int n, double dft, double theta0 = 0.0) {
    std::vector<cplx> m(static_cast<std::size_t>(n) * n);
    for (int l = 0; l < n; ++l) {
        for (int k = 0; k < n; ++k) {
            const double d = (k - l) + dft;
            cplx sum;
            const cplx ratio = std::polar(1.0, 2.0 * pi * d / n);
            if (std::abs(1.0 - ratio) < 1e-15) {
                sum = cplx{static_cast<double>(n), 0.0};
            } else {
                sum = (1.0 - std::polar(1.0, 2.0 * pi * d)) / (1.0 - ratio);
            }
            m[static_cast<std::size_t>(l) * n + k] = std::polar(1.0, theta0) * sum / static_cast<double>(n);
        }
    }
    return detail::from_complex(n, OffsetKind::Freq, dft, std::move(m));
}

// Intersubchannel interference: the PLAIN transfer seen through the PCC
// pair mapping (D_k' -> +1 on 2k', -1 on 2k'+1) and, when weighting is
// on, the receiver combining (row 2l' - row 2l'+1)/2.
inline InterferenceMatrix ischi(const InterferenceMatrix& plain, bool weighting) {
    if (plain.dim % 2 != 0) throw std::invalid_argument("ischi: need even N");
    const int half = plain.dim / 2;
    std::vector<cplx> m(static_cast<std::size_t>(half) * half);
    for (int lp = 0; lp < half; ++lp) {
        for (int kp = 0; kp < half; ++kp) {
            const cplx top = plain.cat(2 * lp, 2 * kp) - plain.cat(2 * lp, 2 * kp + 1);
            if (weighting) {
                const cplx bot = plain.cat(2 * lp + 1, 2 * kp) - plain.cat(2 * lp + 1, 2 * kp + 1);
                m[static_cast<std::size_t>(lp) * half + kp] = (top - bot) / 2.0;
            } else {
                m[static_cast<std::size_t>(lp) * half + kp] = top;
            }
        }
    }
    InterferenceMatrix out = detail::from_complex(half, plain.offset_kind, plain.offset, std::move(m));
    out.combine = weighting ? CombineKind::PccWeight : CombineKind::PccNoWeight;
    return out;
}

// Magnitude window of the PCC pair waveform, sqrt(2(1-cos(2 pi l/N))).
inline std::vector<double> envelope_pcc(int n) {
    if (n < 2) throw std::invalid_argument("envelope_pcc: need N >= 2");
    std::vector<double> env(n);
    for (int l = 0; l < n; ++l) env[l] = std::sqrt(2.0 * (1.0 - std::cos(2.0 * pi * l / n)));
    return env;
}

struct PsdEstimate {
    std::vector<double> freq_subcarriers;  // frequency axis, subcarrier spacings, centered on DC
    std::vector<double> psd_db;            // peak-normalized to 0 dB
    int segment_len = 0;
};

// Welch PSD of a random-data transmit stream. Segment length is the
// power of two nearest 4x the symbol span (the estimator itself is not
// pinned down by the roll-off laws; it only has to resolve them).
inline PsdEstimate psd_estimate(const WaveformConfig& cfg, const SubbandAllocation& alloc,
                                int num_symbols, SeededRng& rng) {
    if (num_symbols < 100) throw std::invalid_argument("psd_estimate: need at least 100 symbols");
    Transceiver trx(cfg, alloc);
    const Constellation c = Constellation::make(4);
    std::vector<cvec> data(num_symbols);
    for (auto& d : data) {
        d.resize(trx.data_per_symbol());
        for (auto& v : d) {
            const std::uint32_t label = static_cast<std::uint32_t>(rng.next_u64() & 3);
            v = c.point(label);
        }
    }
    const cvec stream = trx.tx(data);

    std::size_t seg = 1;
    while (seg * 2 <= static_cast<std::size_t>(4 * cfg.symbol_span())) seg *= 2;
    const std::vector<double> raw = welch_psd(stream, seg, seg / 2);

    PsdEstimate out;
    out.segment_len = static_cast<int>(seg);
    out.freq_subcarriers.resize(seg);
    out.psd_db.resize(seg);
    double peak = 0.0;
    for (double v : raw) peak = std::max(peak, v);
    for (std::size_t i = 0; i < seg; ++i) {
        // fftshift: bin 0 at the center of the axis
        const std::size_t src = (i + seg / 2) % seg;
        const double f_cycles = (static_cast<double>(i) - static_cast<double>(seg / 2)) / seg;
        out.freq_subcarriers[i] = f_cycles * cfg.n;
        out.psd_db[i] = 10.0 * std::log10(std::max(raw[src] / peak, 1e-300));
    }
    return out;
}

// Least-squares slope (dB per decade) of the PSD sidelobe envelope over
// [band_edge + from, band_edge + to], measured against
// log10(frequency - band_edge). Local maxima are used so spectral
// nulls do not corrupt the fit.
inline double oob_slope(const std::vector<double>& freq, const std::vector<double>& psd_db,
                        double band_edge, double from, double to) {
    if (freq.size() != psd_db.size() || freq.size() < 3) throw std::invalid_argument("oob_slope: bad input");
    std::vector<double> lx, ly;
    for (std::size_t i = 1; i + 1 < freq.size(); ++i) {
        const double off = freq[i] - band_edge;
        if (off < from || off > to) continue;
        if (psd_db[i] >= psd_db[i - 1] && psd_db[i] >= psd_db[i + 1]) {
            lx.push_back(std::log10(off));
            ly.push_back(psd_db[i]);
        }
    }
    if (lx.size() < 8) throw std::invalid_argument("oob_slope: fewer than 8 envelope points in fit region");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace mcw
