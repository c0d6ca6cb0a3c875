#include <doctest.h>

#include "mcwave/scenarios.hpp"
#include "mcwave/uplink.hpp"

using namespace mcw;

TEST_CASE("timing offset quantization") {
    CHECK(timing_shift_samples(0.05, 256) == 13);
    CHECK(timing_shift_samples(-0.05, 256) == -13);
    CHECK(timing_shift_samples(0.0, 256) == 0);
    CHECK(timing_shift_samples(0.125, 256) == 32);
}

TEST_CASE("timing offset shifts samples and zero-pads") {
    cvec x(10);
    for (int i = 0; i < 10; ++i) x[i] = cplx{static_cast<double>(i), 0.0};
    // tau*n = 3: advance by 3.
    const cvec adv = apply_timing_offset(x, 0.3, 10);
    CHECK(adv[0].real() == 3.0);
    CHECK(adv[6].real() == 9.0);
    CHECK(std::abs(adv[7]) == 0.0);
    const cvec del = apply_timing_offset(x, -0.3, 10);
    CHECK(std::abs(del[0]) == 0.0);
    CHECK(del[3].real() == 0.0);
    CHECK(del[9].real() == 6.0);
    CHECK_THROWS_AS(apply_timing_offset(x, 0.6, 10), std::invalid_argument);

    // Delay then advance restores the interior.
    const cvec back = apply_timing_offset(del, 0.3, 10);
    for (int i = 0; i < 7; ++i) CHECK(std::abs(back[i] - x[i]) == 0.0);
}

TEST_CASE("cfo preserves magnitude and rotates linearly") {
    cvec x(300, cplx{1.0, 0.0});
    const cvec y = apply_cfo(x, 0.05, 256, 0.3);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(std::abs(y[i]) == doctest::Approx(1.0).epsilon(1e-12));
        const double phase = 2.0 * pi * 0.05 * static_cast<double>(i) / 256.0 + 0.3;
        CHECK(std::abs(y[i] - std::polar(1.0, phase)) < 1e-12);
    }
    // Zero offset is an identity.
    const cvec z = apply_cfo(x, 0.0, 256);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == x[i]);
}

TEST_CASE("symbol-reset cfo restarts every span") {
    cvec x(3 * 288, cplx{1.0, 0.0});
    const cvec y = apply_cfo_symbol_reset(x, 0.05, 256, 288);
    for (int s = 0; s < 3; ++s)
        CHECK(std::abs(y[s * 288] - cplx{1.0, 0.0}) < 1e-12);
    // Within a span it matches the free-running version.
    const cvec f = apply_cfo(x, 0.05, 256);
    for (int i = 0; i < 288; ++i) CHECK(std::abs(y[i] - f[i]) < 1e-12);
}

TEST_CASE("bit accounting") {
    UserScenario u;
    u.alloc.subband_size = 12;
    u.alloc.start_indices = {122};
    u.constellation_order = 16;
    CHECK(info_bits_per_symbol(u, WaveformKind::CpOfdm) == 48);
    CHECK(info_bits_per_symbol(u, WaveformKind::PccOfdm) == 24);
    // Noise calibration counts occupied subcarriers for every waveform.
    CHECK(ebn0_norm_bits_per_symbol(u, WaveformKind::CpOfdm) == 48);
    CHECK(ebn0_norm_bits_per_symbol(u, WaveformKind::PccOfdm) == 48);
}

TEST_CASE("compose validation") {
    const WaveformConfig cfg = canonical_waveform(WaveformKind::CpOfdm);
    UserScenario u;
    u.alloc.start_indices = {122};
    SeededRng rng(1, 0);
    cvec s(288, cplx{1.0, 0.0});
    CHECK_THROWS_AS(compose_uplink({}, {}, cfg, 10.0, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(compose_uplink({u}, {s}, cfg, 10.0, 3, rng), std::invalid_argument);
    UserScenario off = u;
    off.tau = 0.1;
    CHECK_THROWS_AS(compose_uplink({off}, {s}, cfg, 10.0, 0, rng), std::invalid_argument);
    cvec longer(300, cplx{1.0, 0.0});
    CHECK_THROWS_AS(compose_uplink({u, u}, {s, longer}, cfg, 10.0, 0, rng), std::invalid_argument);
    UserScenario bad = u;
    bad.dft = 3.0;
    CHECK_THROWS_AS(compose_uplink({u, bad}, {s, s}, cfg, 10.0, 0, rng), std::invalid_argument);
}

TEST_CASE("noise calibration formula and injected variance") {
    const WaveformConfig cfg = canonical_waveform(WaveformKind::CpOfdm);
    UserScenario u;
    u.alloc.start_indices = {122};
    u.constellation_order = 4;

    Transceiver trx(cfg, u.alloc);
    SeededRng data_rng(5, 0);
    std::vector<cvec> data(60, cvec(trx.data_per_symbol()));
    const auto c = Constellation::make(4);
    for (auto& row : data)
        for (auto& v : row) v = c.point(static_cast<std::uint32_t>(data_rng.next_u64() & 3));
    const cvec stream = trx.tx(data);

    SeededRng rng(9, 1);
    const double ebn0 = 8.0;
    const ChannelOutput clean = compose_uplink({u}, {stream}, cfg, ebn0, 0, rng, false);
    const double expect_n0 = mean_power(stream) * 288.0 / (24.0 * db_to_lin(ebn0));
    CHECK(clean.n0 == doctest::Approx(expect_n0).epsilon(1e-12));

    const ChannelOutput noisy = compose_uplink({u}, {stream}, cfg, ebn0, 0, rng, true);
    double acc = 0.0;
    for (std::size_t i = 0; i < stream.size(); ++i) acc += std::norm(noisy.samples[i] - clean.samples[i]);
    CHECK(acc / stream.size() == doctest::Approx(expect_n0).epsilon(0.05));
}

TEST_CASE("disjoint users add power") {
    const WaveformConfig cfg = canonical_waveform(WaveformKind::CpOfdm);
    UserScenario u1, u2;
    u1.alloc.start_indices = {116};
    u2.alloc.start_indices = {140};
    Transceiver t1(cfg, u1.alloc), t2(cfg, u2.alloc);
    SeededRng rng(11, 0);
    const auto c = Constellation::make(4);
    auto frame = [&](const Transceiver& t) {
        std::vector<cvec> d(40, cvec(t.data_per_symbol()));
        for (auto& row : d)
            for (auto& v : row) v = c.point(static_cast<std::uint32_t>(rng.next_u64() & 3));
        return t.tx(d);
    };
    const cvec s1 = frame(t1), s2 = frame(t2);
    SeededRng noise(1, 0);
    const ChannelOutput out = compose_uplink({u1, u2}, {s1, s2}, cfg, 100.0, 0, noise, false);
    CHECK(mean_power(out.samples) ==
          doctest::Approx(mean_power(s1) + mean_power(s2)).epsilon(0.02));
    CHECK(out.applied_shift == std::vector<int>{0, 0});
}

TEST_CASE("interferer gain scales its contribution") {
    const WaveformConfig cfg = canonical_waveform(WaveformKind::CpOfdm);
    UserScenario u1, u2;
    u1.alloc.start_indices = {116};
    u2.alloc.start_indices = {140};
    u2.gain_db = 10.0;
    cvec s1(288, cplx{0.0, 0.0});
    cvec s2(288, cplx{1.0, 0.0});
    SeededRng rng(1, 0);
    const ChannelOutput out = compose_uplink({u1, u2}, {s1, s2}, cfg, 100.0, 0, rng, false);
    CHECK(mean_power(out.samples) == doctest::Approx(10.0).epsilon(1e-9));
}
