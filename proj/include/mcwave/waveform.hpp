#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>

#include "mcwave/fft.hpp"
#include "mcwave/filter.hpp"
#include "mcwave/types.hpp"

namespace mcw {

enum class WaveformKind { CpOfdm, PccOfdm, Ufmc };

inline const char* waveform_name(WaveformKind k) {
    switch (k) {
        case WaveformKind::CpOfdm: return "cp-ofdm";
        case WaveformKind::PccOfdm: return "pcc-ofdm";
        case WaveformKind::Ufmc: return "ufmc";
    }
    return "?";
}

struct WaveformConfig {
    WaveformKind kind = WaveformKind::CpOfdm;
    int n = 256;            // FFT size
    int n_cp = 32;          // cyclic prefix (CP-OFDM)
    int filter_len = 33;    // subband filter length (UFMC), odd
    double filter_atten_db = 40.0;
    bool pcc_weighting = true;
    int pcc_cp = 0;

    int symbol_span() const {
        switch (kind) {
            case WaveformKind::CpOfdm: return n + n_cp;
            case WaveformKind::PccOfdm: return n + pcc_cp;
            case WaveformKind::Ufmc: return n + filter_len - 1;
        }
        return n;
    }

    void validate() const {
        if (!is_pow2(static_cast<std::size_t>(n))) throw std::invalid_argument("WaveformConfig: N must be a power of two");
        if (n_cp < 0 || n_cp >= n) throw std::invalid_argument("WaveformConfig: need 0 <= N_CP < N");
        if (filter_len < 1 || filter_len > n || filter_len % 2 == 0)
            throw std::invalid_argument("WaveformConfig: filter length must be odd and in [1, N]");
        if (pcc_cp < 0 || pcc_cp >= n) throw std::invalid_argument("WaveformConfig: need 0 <= pcc_cp < N");
    }
};

struct SubbandAllocation {
    int subband_size = 12;
    std::vector<int> start_indices;
    int guard = 0;

    int num_allocated() const { return subband_size * static_cast<int>(start_indices.size()); }

    std::vector<int> carriers() const {
        std::vector<int> out;
        out.reserve(num_allocated());
        for (int s : start_indices)
            for (int i = 0; i < subband_size; ++i) out.push_back(s + i);
        return out;
    }

    void validate(int n, bool pcc) const {
        if (subband_size <= 0 || start_indices.empty())
            throw std::invalid_argument("SubbandAllocation: empty allocation");
        std::vector<int> sorted = start_indices;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] < 0 || sorted[i] + subband_size > n)
                throw std::invalid_argument("SubbandAllocation: subband outside [0, N)");
            if (i > 0 && sorted[i] < sorted[i - 1] + subband_size)
                throw std::invalid_argument("SubbandAllocation: overlapping subbands");
            if (pcc && (sorted[i] % 2 != 0 || subband_size % 2 != 0))
                throw std::invalid_argument("SubbandAllocation: PCC subbands need even start and even size");
        }
    }
};

struct FrequencyDomainFrame {
    int n = 0;
    std::vector<cvec> symbols;  // one length-n vector per symbol
};

// PCC pair mapping: one data value per adjacent subcarrier pair,
// X[2k'] = D[k'], X[2k'+1] = -D[k'].
inline cvec pcc_map(const cvec& data, const SubbandAllocation& alloc, int n) {
    const int pairs = alloc.num_allocated() / 2;
    if (alloc.num_allocated() % 2 != 0)
        throw std::invalid_argument("pcc_map: allocated subcarrier count must be even");
    if (static_cast<int>(data.size()) != pairs)
        throw std::invalid_argument("pcc_map: need one data value per subcarrier pair");
    cvec row(n, cplx{0.0, 0.0});
    std::size_t d = 0;
    for (int s : alloc.start_indices) {
        for (int i = 0; i < alloc.subband_size; i += 2) {
            row[s + i] = data[d];
            row[s + i + 1] = -data[d];
            ++d;
        }
    }
    return row;
}

// Receiver weighting-and-adding: Z[l'] = (Y[2l'] - Y[2l'+1]) / 2 (the
// 1/2 keeps the noiseless data path at unit gain). With weighting off,
// the decision uses the even subcarrier alone.
inline cvec pcc_combine(const cvec& y, bool weighting = true) {
    cvec z(y.size() / 2);
    for (std::size_t l = 0; l < z.size(); ++l)
        z[l] = weighting ? (y[2 * l] - y[2 * l + 1]) / 2.0 : y[2 * l];
    return z;
}

inline cvec tx_cp_ofdm(const FrequencyDomainFrame& frame, const WaveformConfig& cfg) {
    const int span = cfg.n + cfg.n_cp;
    cvec out;
    out.reserve(frame.symbols.size() * span);
    for (const auto& row : frame.symbols) {
        cvec body = dft(row, true);
        for (int i = cfg.n - cfg.n_cp; i < cfg.n; ++i) out.push_back(body[i]);
        out.insert(out.end(), body.begin(), body.end());
    }
    return out;
}

namespace detail {

// Demodulation window for a CP-extended symbol: take the first N
// samples of the span and cyclically realign them so that a
// zero-offset noiseless chain returns X exactly. Receiver delays up to
// the CP length then appear as pure phase ramps exp(j 2 pi k p / N).
inline cvec cp_window(std::span<const cplx> span_samples, int n, int n_cp) {
    cvec w(n);
    for (int i = 0; i < n; ++i) w[i] = span_samples[(i + n_cp) % n];
    return w;
}

}  // namespace detail

inline FrequencyDomainFrame rx_cp_ofdm(std::span<const cplx> samples, const WaveformConfig& cfg,
                                        const cvec& equalizer) {
    const int span = cfg.n + cfg.n_cp;
    const std::size_t s_count = samples.size() / span;
    if (s_count == 0) throw std::invalid_argument("rx_cp_ofdm: input shorter than one symbol");
    FrequencyDomainFrame out{cfg.n, {}};
    out.symbols.reserve(s_count);
    for (std::size_t s = 0; s < s_count; ++s) {
        cvec w = detail::cp_window(samples.subspan(s * span, span), cfg.n, cfg.n_cp);
        fft_inplace(w, false);
        for (int k = 0; k < cfg.n; ++k) w[k] *= equalizer[k];
        out.symbols.push_back(std::move(w));
    }
    return out;
}

inline cvec tx_pcc_ofdm(const FrequencyDomainFrame& frame, const WaveformConfig& cfg) {
    const int span = cfg.n + cfg.pcc_cp;
    cvec out;
    out.reserve(frame.symbols.size() * span);
    for (const auto& row : frame.symbols) {
        cvec body = dft(row, true);
        for (int i = cfg.n - cfg.pcc_cp; i < cfg.n; ++i) out.push_back(body[i]);
        out.insert(out.end(), body.begin(), body.end());
    }
    return out;
}

// Per-subcarrier equalization happens before pair combining; the
// combining itself is done on complex values.
inline std::vector<cvec> rx_pcc_ofdm(std::span<const cplx> samples, const WaveformConfig& cfg,
                                     const cvec& equalizer) {
    const int span = cfg.n + cfg.pcc_cp;
    const std::size_t s_count = samples.size() / span;
    if (s_count == 0) throw std::invalid_argument("rx_pcc_ofdm: input shorter than one symbol");
    std::vector<cvec> out;
    out.reserve(s_count);
    for (std::size_t s = 0; s < s_count; ++s) {
        cvec w = detail::cp_window(samples.subspan(s * span, span), cfg.n, cfg.pcc_cp);
        fft_inplace(w, false);
        for (int k = 0; k < cfg.n; ++k) w[k] *= equalizer[k];
        out.push_back(pcc_combine(w, cfg.pcc_weighting));
    }
    return out;
}

inline std::vector<ProtoFilter> ufmc_subband_filters(const WaveformConfig& cfg, const SubbandAllocation& alloc) {
    std::vector<ProtoFilter> filters;
    filters.reserve(alloc.start_indices.size());
    for (int s : alloc.start_indices) {
        const double center = (s + (alloc.subband_size - 1) / 2.0) / cfg.n;
        filters.push_back(chebyshev_filter(cfg.filter_len, cfg.filter_atten_db, center));
    }
    return filters;
}

inline cvec tx_ufmc(const FrequencyDomainFrame& frame, const WaveformConfig& cfg, const SubbandAllocation& alloc,
                    const std::vector<ProtoFilter>* filters = nullptr) {
    std::vector<ProtoFilter> local;
    if (!filters) {
        local = ufmc_subband_filters(cfg, alloc);
        filters = &local;
    }
    const int span = cfg.n + cfg.filter_len - 1;
    cvec out(frame.symbols.size() * span, cplx{0.0, 0.0});
    for (std::size_t s = 0; s < frame.symbols.size(); ++s) {
        for (std::size_t b = 0; b < alloc.start_indices.size(); ++b) {
            cvec sub(cfg.n, cplx{0.0, 0.0});
            const int start = alloc.start_indices[b];
            for (int i = 0; i < alloc.subband_size; ++i)
                sub[start + i] = frame.symbols[s][start + i];
            fft_inplace(sub, true);
            cvec filtered = linear_convolve(sub, (*filters)[b]);
            for (int i = 0; i < span; ++i) out[s * span + i] += filtered[i];
        }
    }
    return out;
}

// 2N-point FFT of the zero-padded symbol; wanted outputs sit on the
// even bins (bin 2k -> subcarrier k).
inline FrequencyDomainFrame rx_ufmc(std::span<const cplx> samples, const WaveformConfig& cfg,
                                    const cvec& equalizer) {
    const int span = cfg.n + cfg.filter_len - 1;
    const std::size_t s_count = samples.size() / span;
    if (s_count == 0) throw std::invalid_argument("rx_ufmc: input shorter than one symbol");
    FrequencyDomainFrame out{cfg.n, {}};
    out.symbols.reserve(s_count);
    cvec padded(2 * cfg.n);
    for (std::size_t s = 0; s < s_count; ++s) {
        std::fill(padded.begin(), padded.end(), cplx{0.0, 0.0});
        for (int i = 0; i < span; ++i) padded[i] = samples[s * span + i];
        fft_inplace(padded, false);
        cvec row(cfg.n);
        for (int k = 0; k < cfg.n; ++k) row[k] = padded[2 * k] * equalizer[k];
        out.symbols.push_back(std::move(row));
    }
    return out;
}

// Immutable per-user transceiver: owns the waveform config, the
// allocation and (for UFMC) the subband filters. Data vectors are
// ordered by ascending allocated subcarrier (PCC: ascending pair).
class Transceiver {
public:
    Transceiver(WaveformConfig cfg, SubbandAllocation alloc) : cfg_(cfg), alloc_(std::move(alloc)) {
        cfg_.validate();
        alloc_.validate(cfg_.n, cfg_.kind == WaveformKind::PccOfdm);
        if (cfg_.kind == WaveformKind::Ufmc) filters_ = ufmc_subband_filters(cfg_, alloc_);
        carriers_ = alloc_.carriers();
        std::sort(carriers_.begin(), carriers_.end());
    }

    const WaveformConfig& config() const { return cfg_; }
    const SubbandAllocation& alloc() const { return alloc_; }
    const std::vector<int>& carriers() const { return carriers_; }

    int data_per_symbol() const {
        const int na = alloc_.num_allocated();
        return cfg_.kind == WaveformKind::PccOfdm ? na / 2 : na;
    }

    FrequencyDomainFrame build_frame(const std::vector<cvec>& data) const {
        FrequencyDomainFrame frame{cfg_.n, {}};
        frame.symbols.reserve(data.size());
        for (const auto& d : data) {
            if (static_cast<int>(d.size()) != data_per_symbol())
                throw std::invalid_argument("Transceiver: wrong data count per symbol");
            if (cfg_.kind == WaveformKind::PccOfdm) {
                frame.symbols.push_back(pcc_map(d, alloc_, cfg_.n));
            } else {
                cvec row(cfg_.n, cplx{0.0, 0.0});
                for (std::size_t i = 0; i < carriers_.size(); ++i) row[carriers_[i]] = d[i];
                frame.symbols.push_back(std::move(row));
            }
        }
        return frame;
    }

    cvec tx(const std::vector<cvec>& data) const {
        const FrequencyDomainFrame frame = build_frame(data);
        switch (cfg_.kind) {
            case WaveformKind::CpOfdm: return tx_cp_ofdm(frame, cfg_);
            case WaveformKind::PccOfdm: return tx_pcc_ofdm(frame, cfg_);
            case WaveformKind::Ufmc: return tx_ufmc(frame, cfg_, alloc_, &filters_);
        }
        return {};
    }

    // Returns per-symbol data estimates on the allocated carriers
    // (PCC: combined subchannel outputs), after the per-subcarrier
    // equalizer.
    std::vector<cvec> rx(std::span<const cplx> samples, const cvec& equalizer) const {
        std::vector<cvec> out;
        if (cfg_.kind == WaveformKind::PccOfdm) {
            auto z = rx_pcc_ofdm(samples, cfg_, equalizer);
            out.reserve(z.size());
            for (const auto& row : z) {
                cvec d(data_per_symbol());
                std::size_t i = 0;
                for (int s : alloc_.start_indices)
                    for (int k = 0; k < alloc_.subband_size; k += 2) d[i++] = row[(s + k) / 2];
                out.push_back(std::move(d));
            }
            return out;
        }
        FrequencyDomainFrame frame = cfg_.kind == WaveformKind::CpOfdm ? rx_cp_ofdm(samples, cfg_, equalizer)
                                                                       : rx_ufmc(samples, cfg_, equalizer);
        out.reserve(frame.symbols.size());
        for (const auto& row : frame.symbols) {
            cvec d(carriers_.size());
            for (std::size_t i = 0; i < carriers_.size(); ++i) d[i] = row[carriers_[i]];
            out.push_back(std::move(d));
        }
        return out;
    }

private:
    WaveformConfig cfg_;
    SubbandAllocation alloc_;
    std::vector<ProtoFilter> filters_;
    std::vector<int> carriers_;
};

}  // namespace mcw
