#include <doctest.h>

#include "mcwave/psd.hpp"
#include "mcwave/rng.hpp"

using namespace mcw;

TEST_CASE("welch psd localizes a tone") {
    const std::size_t seg = 64;
    cvec x(4096);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::polar(1.0, 2.0 * pi * 8.0 * i / seg);
    const auto psd = welch_psd(x, seg, seg / 2);
    REQUIRE(psd.size() == seg);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < seg; ++i)
        if (psd[i] > psd[peak]) peak = i;
    CHECK(peak == 8);
    CHECK(psd[8] > 100.0 * psd[20]);
}

TEST_CASE("welch psd preserves total power") {
    SeededRng rng(17, 0);
    cvec x(8192);
    for (auto& v : x) v = rng.cgaussian(2.5);
    const std::size_t seg = 256;
    const auto psd = welch_psd(x, seg, seg / 2);
    double total = 0.0;
    for (double v : psd) total += v;
    CHECK(total / seg == doctest::Approx(mean_power(x)).epsilon(1e-6));
}

TEST_CASE("welch psd of white noise is flat") {
    SeededRng rng(99, 0);
    cvec x(1 << 16);
    for (auto& v : x) v = rng.cgaussian(1.0);
    const std::size_t seg = 128;
    const auto psd = welch_psd(x, seg, seg / 2);
    // Average octave bands and compare in dB.
    const double mean = mean_power(x);
    for (std::size_t b = 0; b < 8; ++b) {
        double band = 0.0;
        for (std::size_t i = b * seg / 8; i < (b + 1) * seg / 8; ++i) band += psd[i];
        band /= seg / 8.0;
        CHECK(std::abs(10.0 * std::log10(band / mean)) < 1.5);
    }
}

TEST_CASE("welch psd input validation") {
    cvec x(100, cplx{1.0, 0.0});
    CHECK_THROWS_AS(welch_psd(x, 100, 50), std::invalid_argument);  // non power of two
    CHECK_THROWS_AS(welch_psd(x, 128, 64), std::invalid_argument);  // too short
    CHECK_THROWS_AS(welch_psd(x, 64, 64), std::invalid_argument);   // overlap too large
}
