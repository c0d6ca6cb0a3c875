#pragma once

#include "mcwave/harness.hpp"

namespace mcw {

// Canonical experiment geometry: N=256, N_CP=32, L=33, 12-subcarrier
// subbands near mid-band. Two-user layouts place user 1 first, then the
// guard band, then user 2.
inline WaveformConfig canonical_waveform(WaveformKind kind) {
    WaveformConfig w;
    w.kind = kind;
    w.n = 256;
    w.n_cp = 32;
    w.filter_len = 33;
    w.filter_atten_db = 40.0;
    return w;
}

inline std::vector<double> default_ebn0_grid(int mod) {
    switch (mod) {
        case 4: return {0, 2, 4, 6, 8, 10};
        case 16: return {4, 6, 8, 10, 12, 14};
        default: return {8, 10, 12, 14, 16, 18};
    }
}

inline Scenario single_user_scenario(WaveformKind kind, int mod, double tau = 0.0, double dft = 0.0,
                                     std::vector<double> grid = {}, std::uint64_t seed = 1) {
    Scenario s;
    s.waveform = canonical_waveform(kind);
    UserScenario u;
    u.alloc.subband_size = 12;
    u.alloc.start_indices = {122};
    u.constellation_order = mod;
    u.tau = tau;
    u.dft = dft;
    s.users.push_back(u);
    s.measured_user = 0;
    s.ebn0_grid = grid.empty() ? default_ebn0_grid(mod) : std::move(grid);
    s.seed = seed;
    return s;
}

inline Scenario two_user_scenario(WaveformKind kind, int mod, int guard, double gain2_db, double tau2,
                                  double dft2, std::vector<double> grid = {}, std::uint64_t seed = 1) {
    Scenario s;
    s.waveform = canonical_waveform(kind);
    UserScenario u1;
    u1.alloc.subband_size = 12;
    u1.alloc.start_indices = {116};
    u1.alloc.guard = guard;
    u1.constellation_order = mod;
    UserScenario u2 = u1;
    u2.alloc.start_indices = {116 + 12 + guard};
    u2.tau = tau2;
    u2.dft = dft2;
    u2.gain_db = gain2_db;
    s.users = {u1, u2};
    s.measured_user = 0;
    s.ebn0_grid = grid.empty() ? default_ebn0_grid(mod) : std::move(grid);
    s.seed = seed;
    return s;
}

// Mean per-sample magnitude of one isolated symbol, averaged over
// random data: the time-domain envelope of the waveform.
inline std::vector<double> symbol_envelope(const WaveformConfig& cfg, const SubbandAllocation& alloc,
                                           int num_symbols, SeededRng& rng) {
    Transceiver trx(cfg, alloc);
    const Constellation c = Constellation::make(4);
    std::vector<double> acc(cfg.symbol_span(), 0.0);
    for (int s = 0; s < num_symbols; ++s) {
        std::vector<cvec> data(1, cvec(trx.data_per_symbol()));
        for (auto& v : data[0]) v = c.point(static_cast<std::uint32_t>(rng.next_u64() & 3));
        const cvec x = trx.tx(data);
        for (std::size_t i = 0; i < x.size(); ++i) acc[i] += std::norm(x[i]);
    }
    for (auto& v : acc) v = std::sqrt(v / num_symbols);
    return acc;
}

}  // namespace mcw
