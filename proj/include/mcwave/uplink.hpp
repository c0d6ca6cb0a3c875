#pragma once

#include <cmath>
#include <stdexcept>

#include "mcwave/modem.hpp"
#include "mcwave/rng.hpp"
#include "mcwave/waveform.hpp"

namespace mcw {

// One user's place in the uplink: allocation, constellation, offsets
// relative to the receiver and received power relative to the
// reference user.
struct UserScenario {
    SubbandAllocation alloc;
    int constellation_order = 4;
    double tau = 0.0;      // timing offset, fraction of the N-sample body
    double dft = 0.0;      // frequency offset in subcarrier spacings
    double gain_db = 0.0;  // received power relative to the reference user

    void validate() const {
        if (std::abs(tau) > 0.5) throw std::invalid_argument("UserScenario: |tau| must be <= 0.5");
        if (std::abs(dft) > 2.0) throw std::invalid_argument("UserScenario: |dfT| must be <= 2");
    }
};

struct ChannelOutput {
    cvec samples;
    double n0 = 0.0;  // complex noise variance per sample actually injected
    std::vector<int> applied_shift;  // per-user integer sample shift p
};

inline int timing_shift_samples(double tau, int n) {
    return static_cast<int>(std::llround(tau * n));
}

// Integer-sample timing offset. Positive tau delays the receiver
// window relative to this user, i.e. the stream is advanced by
// p = round(tau*N) samples (first p dropped, tail zero-padded).
inline cvec apply_timing_offset(const cvec& x, double tau, int n) {
    if (std::abs(tau) > 0.5) throw std::invalid_argument("apply_timing_offset: |tau| must be <= 0.5");
    const int p = timing_shift_samples(tau, n);
    cvec out(x.size(), cplx{0.0, 0.0});
    if (p >= 0) {
        for (std::size_t i = 0; i + p < x.size(); ++i) out[i] = x[i + p];
    } else {
        for (std::size_t i = 0; i + (-p) < x.size(); ++i) out[i + (-p)] = x[i];
    }
    return out;
}

// Carrier frequency offset with a free-running phase: sample n picks
// up exp(j(2 pi dfT n / N + theta0)), continuous across symbol
// boundaries.
inline cvec apply_cfo(const cvec& x, double dft, int n, double theta0 = 0.0) {
    cvec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x[i] * std::polar(1.0, 2.0 * pi * dft * static_cast<double>(i) / n + theta0);
    return out;
}

// Same rotation but with the phase reset to theta0 at the start of
// every symbol span. This is what the BER chain uses: the analysis of
// both offsets assumes a zero phase offset at each symbol start, and
// the waveform comparisons (which correct no CFO) are only meaningful
// on that footing.
inline cvec apply_cfo_symbol_reset(const cvec& x, double dft, int n, int symbol_span, double theta0 = 0.0) {
    cvec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const int local = static_cast<int>(i % static_cast<std::size_t>(symbol_span));
        out[i] = x[i] * std::polar(1.0, 2.0 * pi * dft * static_cast<double>(local) / n + theta0);
    }
    return out;
}

// Information bits per symbol carried by this user (PCC maps one data
// value per subcarrier pair).
inline int info_bits_per_symbol(const UserScenario& u, WaveformKind kind) {
    const Constellation c = Constellation::make(u.constellation_order);
    const int na = u.alloc.num_allocated();
    const int data = kind == WaveformKind::PccOfdm ? na / 2 : na;
    return data * c.bits_per_symbol();
}

// Bit count used for the Eb/N0 noise calibration: log2(M) per occupied
// subcarrier for every waveform. For PCC this is twice the information
// bit count, which makes Eb the per-subcarrier-symbol energy the
// comparison curves are normalized to; folding the pair duplication
// into Eb would cancel the combining gain entirely.
inline int ebn0_norm_bits_per_symbol(const UserScenario& u, WaveformKind /*kind*/) {
    const Constellation c = Constellation::make(u.constellation_order);
    return u.alloc.num_allocated() * c.bits_per_symbol();
}

// Scale, offset, rotate and sum the users' streams, then add AWGN
// calibrated against the reference user's received energy per bit:
// n0 = P_ref * T_span / (B_ref * 10^(ebn0/10)).
inline ChannelOutput compose_uplink(const std::vector<UserScenario>& users,
                                    const std::vector<cvec>& tx_streams, const WaveformConfig& cfg,
                                    double ebn0_db, std::size_t ref_user, SeededRng& rng,
                                    bool add_noise = true) {
    if (users.empty() || users.size() != tx_streams.size())
        throw std::invalid_argument("compose_uplink: users and streams must match");
    if (ref_user >= users.size()) throw std::invalid_argument("compose_uplink: bad reference user");
    if (users[ref_user].tau != 0.0 || users[ref_user].dft != 0.0)
        throw std::invalid_argument("compose_uplink: reference user must have zero offsets");
    const std::size_t len = tx_streams[0].size();
    for (const auto& s : tx_streams)
        if (s.size() != len) throw std::invalid_argument("compose_uplink: stream lengths differ");

    ChannelOutput out;
    out.samples.assign(len, cplx{0.0, 0.0});
    const int span = cfg.symbol_span();
    double p_ref = 0.0;
    for (std::size_t u = 0; u < users.size(); ++u) {
        users[u].validate();
        const double amp = std::pow(10.0, users[u].gain_db / 20.0);
        cvec s = tx_streams[u];
        if (users[u].dft != 0.0) s = apply_cfo_symbol_reset(s, users[u].dft, cfg.n, span);
        if (users[u].tau != 0.0) s = apply_timing_offset(s, users[u].tau, cfg.n);
        out.applied_shift.push_back(timing_shift_samples(users[u].tau, cfg.n));
        for (std::size_t i = 0; i < len; ++i) out.samples[i] += amp * s[i];
        if (u == ref_user) p_ref = amp * amp * mean_power(tx_streams[u]);
    }

    const int b_ref = ebn0_norm_bits_per_symbol(users[ref_user], cfg.kind);
    out.n0 = p_ref * span / (b_ref * db_to_lin(ebn0_db));
    if (add_noise && std::isfinite(ebn0_db)) {
        for (auto& v : out.samples) v += rng.cgaussian(out.n0);
    } else {
        out.n0 = std::isfinite(ebn0_db) ? out.n0 : 0.0;
    }
    return out;
}

}  // namespace mcw
