#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gridharm/signal.hpp"
#include "gridharm/spectral.hpp"

using namespace gridharm;

TEST_CASE("synthesize: 1 A RMS fundamental peaks at sqrt(2)") {
    HarmonicSpectrum s(60.0);
    s.set(1, 1.0);
    const Waveform w = synthesize(s, 1.0, 20000.0);
    REQUIRE(w.size() == 20000);
    double peak = 0.0;
    for (double x : w.samples) peak = std::max(peak, std::abs(x));
    // grid quantization keeps the sampled peak a hair below the true one
    CHECK(peak == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("synthesize: empty spectrum gives an all-zero waveform") {
    HarmonicSpectrum s(60.0);
    const Waveform w = synthesize(s, 0.1, 20000.0);
    for (double x : w.samples) CHECK(x == 0.0);
}

TEST_CASE("synthesize: rejects harmonics at or above Nyquist") {
    HarmonicSpectrum s(60.0);
    s.set(200, 1.0); // 12 kHz vs 10 kHz Nyquist
    CHECK_THROWS_WITH_AS(synthesize(s, 1.0, 20000.0), doctest::Contains("200"), Error);
    try {
        synthesize(s, 1.0, 20000.0);
    } catch (const Error& e) {
        CHECK(e.code() == errc::aliasing);
    }
}

TEST_CASE("synthesize: rejects non-positive duration") {
    HarmonicSpectrum s(60.0);
    s.set(1, 1.0);
    CHECK_THROWS_AS(synthesize(s, 0.0, 20000.0), Error);
    CHECK_THROWS_AS(synthesize(s, -1.0, 20000.0), Error);
}

TEST_CASE("rms: constant and sine fixtures") {
    Waveform constant(std::vector<double>(777, 2.0), 1000.0, 60.0);
    CHECK(rms(constant) == doctest::Approx(2.0).epsilon(1e-15));

    HarmonicSpectrum s(60.0);
    s.set(1, 1.0); // sqrt(2) peak sine
    const Waveform w = synthesize(s, 1.0, 20000.0);
    CHECK(rms(w) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rms: matches the direct formula on random samples") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    std::vector<double> x(1024);
    for (double& v : x) v = dist(rng);
    double acc = 0.0;
    for (double v : x) acc += v * v;
    const double expected = std::sqrt(acc / 1024.0);
    CHECK(rms(Waveform(x, 1000.0, 60.0)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("rms: empty waveform rejected") {
    Waveform w;
    CHECK_THROWS_AS(rms(w), Error);
}

TEST_CASE("waveform invariants") {
    CHECK_THROWS_AS(Waveform({1.0}, 1000.0, 60.0), Error);
    CHECK_THROWS_AS(Waveform({1.0, 2.0}, 0.0, 60.0), Error);
    CHECK_THROWS_AS(Waveform({1.0, 2.0}, 1000.0, -60.0), Error);
}

TEST_CASE("spectrum entries stay sorted, unique, and validated") {
    HarmonicSpectrum s(60.0);
    s.set(5, 0.5);
    s.set(1, 1.0);
    s.set(3, 0.3);
    s.set(3, 0.2); // overwrite
    REQUIRE(s.components().size() == 3);
    CHECK(s.components()[0].order == 1);
    CHECK(s.components()[1].order == 3);
    CHECK(s.magnitude(3) == 0.2);
    CHECK(s.h_max() == 5);
    CHECK_THROWS_AS(s.set(0, 1.0), Error);
    CHECK_THROWS_AS(s.set(3, -1.0), Error);
}

TEST_CASE("property: synthesize is linear under phasor addition") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> mag(0.0, 2.0);
    std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
    for (int trial = 0; trial < 20; ++trial) {
        HarmonicSpectrum a(60.0), b(60.0), sum(60.0);
        for (int h = 1; h <= 9; h += 2) {
            const double ma = mag(rng), pa = ph(rng);
            const double mb = mag(rng), pb = ph(rng);
            a.set(h, ma, pa);
            b.set(h, mb, pb);
            sum.add_phasor(h, std::polar(ma, pa));
            sum.add_phasor(h, std::polar(mb, pb));
        }
        const Waveform wa = synthesize(a, 0.05, 20000.0);
        const Waveform wb = synthesize(b, 0.05, 20000.0);
        const Waveform ws = synthesize(sum, 0.05, 20000.0);
        for (std::size_t i = 0; i < ws.size(); ++i)
            CHECK(ws.samples[i] ==
                  doctest::Approx(wa.samples[i] + wb.samples[i]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("property: signal-level Parseval for integer-period captures") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> mag(0.0, 3.0);
    std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
    for (int trial = 0; trial < 20; ++trial) {
        HarmonicSpectrum s(60.0);
        double sum_sq = 0.0;
        for (int h = 1; h <= 15; ++h) {
            const double m = mag(rng);
            s.set(h, m, ph(rng));
            sum_sq += m * m;
        }
        const Waveform w = synthesize(s, 0.1, 20000.0); // 6 periods exactly
        const double r = rms(w);
        CHECK(r * r == doctest::Approx(sum_sq).epsilon(1e-9));
    }
}

TEST_CASE("property: round trip through analyze recovers magnitudes and phases") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> mag(0.01, 5.0);
    std::uniform_real_distribution<double> ph(-3.0, 3.0);
    spectral::SpectralConfig cfg;
    for (int trial = 0; trial < 10; ++trial) {
        HarmonicSpectrum s(60.0);
        for (int h = 1; h <= 15; h += 2) s.set(h, mag(rng), ph(rng));
        const Waveform w = synthesize(s, 1.0, 20000.0);
        const HarmonicSpectrum back = spectral::analyze(w, cfg);
        for (const auto& c : s.components()) {
            CHECK(back.magnitude(c.order) == doctest::Approx(c.amps_rms).epsilon(1e-6));
            CHECK(std::remainder(back.phase(c.order) - c.phase_rad, 2.0 * std::numbers::pi) ==
                  doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
        }
    }
}
