#pragma once

#include <atomic>
#include <bit>
#include <cstring>
#include <optional>
#include <sstream>
#include <thread>

#include "mcwave/analysis.hpp"
#include "mcwave/modem.hpp"
#include "mcwave/uplink.hpp"

namespace mcw {

struct Scenario {
    WaveformConfig waveform;
    std::vector<UserScenario> users;
    int measured_user = 0;
    std::vector<double> ebn0_grid;
    std::optional<double> target_ber;
    int frame_symbols = 20;
    long long max_bits = 20'000'000;
    int min_errors = 200;
    std::uint64_t seed = 1;

    void validate() const {
        waveform.validate();
        if (users.empty()) throw std::invalid_argument("Scenario: no users");
        if (measured_user < 0 || measured_user >= static_cast<int>(users.size()))
            throw std::invalid_argument("Scenario: bad measured user");
        for (const auto& u : users) {
            u.validate();
            u.alloc.validate(waveform.n, waveform.kind == WaveformKind::PccOfdm);
        }
        if (ebn0_grid.empty()) throw std::invalid_argument("Scenario: empty Eb/N0 grid");
        for (std::size_t i = 1; i < ebn0_grid.size(); ++i)
            if (ebn0_grid[i] <= ebn0_grid[i - 1]) throw std::invalid_argument("Scenario: Eb/N0 grid must increase");
        if (frame_symbols < 3) throw std::invalid_argument("Scenario: need at least 3 symbols per frame");
        if (min_errors < 1) throw std::invalid_argument("Scenario: min_errors must be positive");
    }

    std::uint64_t digest() const {
        std::ostringstream os;
        os << static_cast<int>(waveform.kind) << '|' << waveform.n << '|' << waveform.n_cp << '|'
           << waveform.filter_len << '|' << waveform.filter_atten_db << '|' << waveform.pcc_weighting << '|'
           << waveform.pcc_cp << '|' << measured_user << '|' << frame_symbols << '|' << max_bits << '|'
           << min_errors << '|' << seed;
        for (const auto& u : users) {
            os << "/u:" << u.alloc.subband_size << ',' << u.alloc.guard << ',' << u.constellation_order << ','
               << u.tau << ',' << u.dft << ',' << u.gain_db;
            for (int s : u.alloc.start_indices) os << ':' << s;
        }
        for (double e : ebn0_grid) os << "/e:" << e;
        if (target_ber) os << "/t:" << *target_ber;
        const std::string s = os.str();
        return fnv1a(s.data(), s.size());
    }

    std::string digest_hex() const {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest()));
        return buf;
    }
};

struct BerRecord {
    double ebn0_db = 0.0;
    long long bit_errors = 0;
    long long bits = 0;
    double ber = 0.0;
    double std_err = 0.0;
    bool upper_bound = false;  // max_bits hit before min_errors
    std::string scenario_digest;
};

// Two-stage genie equalizer for the measured user: a per-subcarrier
// stage applied right after the receiver FFT and a per-subchannel
// stage applied to the data estimates. For PCC the first stage removes
// only the timing phase ramp (so pair combining stays aligned) and the
// second stage inverts the post-combine diagonal gain; for the other
// waveforms everything sits in the second stage.
struct GenieEqualizer {
    cvec pre;
    cvec post;
};

namespace detail {

inline cvec impair_measured(const cvec& stream, const WaveformConfig& cfg, double tau, double dft) {
    cvec s = stream;
    if (dft != 0.0) s = apply_cfo_symbol_reset(s, dft, cfg.n, cfg.symbol_span());
    if (tau != 0.0) s = apply_timing_offset(s, tau, cfg.n);
    return s;
}

}  // namespace detail

inline GenieEqualizer make_genie_equalizer(const Transceiver& trx, double tau, double dft, double amp = 1.0) {
    const WaveformConfig& cfg = trx.config();
    GenieEqualizer eq;
    eq.pre.assign(cfg.n, cplx{1.0, 0.0});
    if (cfg.kind == WaveformKind::PccOfdm) {
        const int p = timing_shift_samples(tau, cfg.n);
        for (int k = 0; k < cfg.n; ++k) eq.pre[k] = std::polar(1.0, -2.0 * pi * k * p / cfg.n);
    }
    const int d = trx.data_per_symbol();
    eq.post.assign(d, cplx{1.0, 0.0});
    // Probe each subchannel through an isolated middle symbol.
    for (int i = 0; i < d; ++i) {
        std::vector<cvec> data(3, cvec(d, cplx{0.0, 0.0}));
        data[1][i] = cplx{1.0, 0.0};
        cvec stream = trx.tx(data);
        for (auto& v : stream) v *= amp;
        stream = detail::impair_measured(stream, cfg, tau, dft);
        const auto est = trx.rx(stream, eq.pre);
        const cplx g = est[1][i];
        if (std::abs(g) < 1e-12) throw std::runtime_error("genie equalizer: vanishing subchannel gain");
        eq.post[i] = 1.0 / g;
    }
    return eq;
}

// Scenario-driven Monte-Carlo BER engine. All randomness is drawn from
// per-frame substreams keyed on (seed, Eb/N0, frame, user), so a point
// is bit-reproducible for a fixed seed regardless of thread count or
// scheduling; stopping decisions happen at fixed frame-batch
// boundaries for the same reason.
class BerEngine {
public:
    explicit BerEngine(const Scenario& s, int threads = 1) : sc_(s), threads_(std::max(1, threads)) {
        sc_.validate();
        for (const auto& u : sc_.users) {
            SubbandAllocation a = u.alloc;
            trx_.emplace_back(sc_.waveform, a);
            consts_.push_back(Constellation::make(u.constellation_order));
        }
        measured_ = sc_.measured_user;
        tau_m_ = sc_.users[measured_].tau;
        dft_m_ = sc_.users[measured_].dft;
        // The measured user's offsets are receiver misalignment: they
        // are applied to the composed stream, and compose_uplink sees a
        // zero-offset reference user.
        users_for_compose_ = sc_.users;
        users_for_compose_[measured_].tau = 0.0;
        users_for_compose_[measured_].dft = 0.0;
        const double amp = std::pow(10.0, sc_.users[measured_].gain_db / 20.0);
        genie_ = make_genie_equalizer(trx_[measured_], tau_m_, dft_m_, amp);
        digest_hex_ = sc_.digest_hex();
    }

    const Scenario& scenario() const { return sc_; }

    BerRecord run_point(double ebn0_db) const {
        long long errors = 0;
        long long bits = 0;
        const int counted_symbols = sc_.frame_symbols - 2;
        const long long bits_per_frame =
            static_cast<long long>(counted_symbols) * trx_[measured_].data_per_symbol() *
            consts_[measured_].bits_per_symbol();
        const long long batch = 32;
        std::uint64_t frame = 0;
        while (errors < sc_.min_errors && bits < sc_.max_bits) {
            std::vector<long long> batch_errors(threads_, 0);
            if (threads_ == 1) {
                for (long long b = 0; b < batch; ++b) batch_errors[0] += run_frame(ebn0_db, frame + b);
            } else {
                std::vector<std::thread> pool;
                for (int t = 0; t < threads_; ++t) {
                    pool.emplace_back([&, t] {
                        for (long long b = t; b < batch; b += threads_)
                            batch_errors[t] += run_frame(ebn0_db, frame + b);
                    });
                }
                for (auto& th : pool) th.join();
            }
            for (long long e : batch_errors) errors += e;
            frame += batch;
            bits += batch * bits_per_frame;
        }
        BerRecord rec;
        rec.ebn0_db = ebn0_db;
        rec.bit_errors = errors;
        rec.bits = bits;
        rec.ber = static_cast<double>(errors) / static_cast<double>(bits);
        rec.std_err = std::sqrt(rec.ber * (1.0 - rec.ber) / static_cast<double>(bits));
        rec.upper_bound = errors < sc_.min_errors;
        rec.scenario_digest = digest_hex_;
        return rec;
    }

    std::vector<BerRecord> run_all() const {
        std::vector<BerRecord> out;
        out.reserve(sc_.ebn0_grid.size());
        for (double e : sc_.ebn0_grid) out.push_back(run_point(e));
        return out;
    }

private:
    // Returns the measured user's bit errors over the interior symbols
    // of one frame.
    long long run_frame(double ebn0_db, std::uint64_t frame) const {
        const std::uint64_t point_key = hash_combine(sc_.digest(), std::bit_cast<std::uint64_t>(ebn0_db));
        const int s_count = sc_.frame_symbols;
        std::vector<cvec> streams(sc_.users.size());
        std::vector<BitBlock> measured_bits;

        for (std::size_t u = 0; u < sc_.users.size(); ++u) {
            const std::uint64_t stream_id =
                hash_combine(hash_combine(point_key, frame), 0x1000 + u);
            SeededRng rng(sc_.seed, stream_id);
            const int bps = consts_[u].bits_per_symbol();
            const int data = trx_[u].data_per_symbol();
            std::vector<cvec> frame_data(s_count);
            if (static_cast<int>(u) == measured_) measured_bits.resize(s_count);
            for (int s = 0; s < s_count; ++s) {
                BitBlock bits(static_cast<std::size_t>(data) * bps);
                for (auto& b : bits) b = static_cast<std::uint8_t>(rng.random_bit());
                frame_data[s] = qam_map(bits, consts_[u]);
                if (static_cast<int>(u) == measured_) measured_bits[s] = std::move(bits);
            }
            streams[u] = trx_[u].tx(frame_data);
        }

        SeededRng noise_rng(sc_.seed, hash_combine(hash_combine(point_key, frame), 0x2002));
        ChannelOutput ch = compose_uplink(users_for_compose_, streams, sc_.waveform, ebn0_db,
                                          static_cast<std::size_t>(measured_), noise_rng);
        const cvec rx_stream = detail::impair_measured(ch.samples, sc_.waveform, tau_m_, dft_m_);

        const auto est = trx_[measured_].rx(rx_stream, genie_.pre);
        long long errors = 0;
        for (int s = 1; s < s_count - 1; ++s) {
            cvec z = est[s];
            for (std::size_t i = 0; i < z.size(); ++i) z[i] *= genie_.post[i];
            const BitBlock rx_bits = qam_demap(z, consts_[measured_]);
            const BitBlock& tx_bits = measured_bits[s];
            for (std::size_t i = 0; i < tx_bits.size(); ++i) errors += (rx_bits[i] != tx_bits[i]);
        }
        return errors;
    }

    Scenario sc_;
    int threads_;
    std::vector<Transceiver> trx_;
    std::vector<Constellation> consts_;
    std::vector<UserScenario> users_for_compose_;
    int measured_ = 0;
    double tau_m_ = 0.0, dft_m_ = 0.0;
    GenieEqualizer genie_;
    std::string digest_hex_;
};

inline std::vector<BerRecord> run_ber(const Scenario& s, int threads = 1) {
    return BerEngine(s, threads).run_all();
}

struct RequiredResult {
    double offset_value = 0.0;
    double required_ebn0_db = 0.0;
    bool saturated = false;
};

// Bisection on Eb/N0 until the bracket shrinks to 0.1 dB (or the BER
// confidence interval cleanly excludes the target). Targets that stay
// unreachable at the top of the bracket are reported as saturated.
inline RequiredResult required_ebn0(const Scenario& s, double target_ber, int threads = 1,
                                    double lo = -2.0, double hi = 40.0) {
    BerEngine engine(s, threads);
    RequiredResult res;
    const BerRecord top = engine.run_point(hi);
    if (top.ber - 3.0 * top.std_err > target_ber) {
        res.required_ebn0_db = hi;
        res.saturated = true;
        return res;
    }
    const BerRecord bottom = engine.run_point(lo);
    if (bottom.ber + 3.0 * bottom.std_err < target_ber) {
        res.required_ebn0_db = lo;  // already below target at the bracket floor
        return res;
    }
    while (hi - lo > 0.1) {
        const double mid = 0.5 * (lo + hi);
        const BerRecord r = engine.run_point(mid);
        if (r.ber > target_ber)
            lo = mid;
        else
            hi = mid;
    }
    res.required_ebn0_db = 0.5 * (lo + hi);
    return res;
}

}  // namespace mcw
