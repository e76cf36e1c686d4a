#include "gridharm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gridharm::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    if (n == 1) {
        w[0] = 1.0;
        return w;
    }
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1)));
    return w;
}

} // namespace

std::vector<std::complex<double>> dft_direct(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0)
        throw Error(errc::invalid_argument, "dft of an empty sequence is undefined");
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = -kTwoPi * static_cast<double>((k * i) % n) / static_cast<double>(n);
            re += x[i] * std::cos(ang);
            im += x[i] * std::sin(ang);
        }
        out[k] = {re, im};
    }
    return out;
}

std::complex<double> dft_bin(std::span<const double> x, std::size_t k) {
    const std::size_t n = x.size();
    if (n == 0)
        throw Error(errc::invalid_argument, "dft of an empty sequence is undefined");
    // Kahan-compensated accumulation; harmonic magnitudes feed loss formulas
    // and the scenario comparisons assert absolute agreement near 1e-9 A.
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ang = -kTwoPi * static_cast<double>((k * i) % n) / static_cast<double>(n);
        const double tre = x[i] * std::cos(ang);
        const double tim = x[i] * std::sin(ang);
        double y = tre - cre;
        double t = re + y;
        cre = (t - re) - y;
        re = t;
        y = tim - cim;
        t = im + y;
        cim = (t - im) - y;
        im = t;
    }
    return {re, im};
}

std::vector<std::complex<double>> fft(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0)
        throw Error(errc::invalid_argument, "fft of an empty sequence is undefined");
    if (!is_pow2(n))
        throw Error(errc::invalid_argument,
                    "fft length " + std::to_string(n) + " is not a power of two");

    std::vector<std::complex<double>> a(x.begin(), x.end());

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        twiddle[k] = std::polar(1.0, -kTwoPi * static_cast<double>(k) / static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * twiddle[j * stride];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    return a;
}

std::size_t prepared_length(std::size_t n, double sample_rate_hz, double fundamental_hz) {
    if (n < 2 || !(sample_rate_hz > 0.0) || !(fundamental_hz > 0.0))
        throw Error(errc::invalid_argument, "invalid capture parameters");

    const long double periods =
        static_cast<long double>(n) * fundamental_hz / sample_rate_hz;
    // slack absorbs representation fuzz when the capture ends exactly on a
    // period boundary
    long long m = static_cast<long long>(std::floor(periods + 1e-9L));
    if (m < 1)
        throw Error(errc::short_capture,
                    "capture covers less than one fundamental period (insufficient resolution)");

    while (m >= 1) {
        const long double exact = static_cast<long double>(m) * sample_rate_hz / fundamental_hz;
        const auto np = static_cast<std::size_t>(llroundl(exact));
        if (np >= 2 && np <= n) return np;
        --m;
    }
    throw Error(errc::short_capture,
                "capture covers less than one fundamental period (insufficient resolution)");
}

HarmonicSpectrum analyze(const Waveform& w, const SpectralConfig& cfg) {
    if (cfg.h_max < 1)
        throw Error(errc::invalid_argument, "h_max must be at least 1");
    if (cfg.scan_halfwidth < 0)
        throw Error(errc::invalid_argument, "scan halfwidth must be non-negative");
    if (static_cast<double>(cfg.h_max) * w.fundamental_hz >= w.sample_rate_hz / 2.0)
        throw Error(errc::nyquist,
                    "harmonic band up to order " + std::to_string(cfg.h_max) +
                        " exceeds Nyquist for sample rate " + std::to_string(w.sample_rate_hz));

    const std::size_t np = prepared_length(w.size(), w.sample_rate_hz, w.fundamental_hz);
    std::span<const double> x(w.samples.data(), np);

    std::vector<double> windowed;
    double coherent_sum = static_cast<double>(np);
    if (cfg.window == Window::Hann) {
        const std::vector<double> win = hann_window(np);
        windowed.resize(np);
        coherent_sum = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            windowed[i] = x[i] * win[i];
            coherent_sum += win[i];
        }
        x = std::span<const double>(windowed.data(), np);
    }

    // Full transform when the radix-2 path applies; otherwise only the
    // scanned bins are evaluated, directly from the transform definition.
    std::vector<std::complex<double>> full;
    const bool have_full = is_pow2(np);
    if (have_full) full = fft(x);
    auto bin = [&](std::size_t k) { return have_full ? full[k] : dft_bin(x, k); };

    const auto half = static_cast<long long>(np / 2);
    HarmonicSpectrum spectrum(w.fundamental_hz);
    for (int h = 1; h <= cfg.h_max; ++h) {
        const long long target = llround(static_cast<double>(h) * w.fundamental_hz *
                                         static_cast<double>(np) / w.sample_rate_hz);
        const long long lo = std::max<long long>(1, target - cfg.scan_halfwidth);
        const long long hi = std::min<long long>(half, target + cfg.scan_halfwidth);
        if (lo > hi)
            throw Error(errc::short_capture,
                        "harmonic order " + std::to_string(h) + " has no resolvable bin");

        std::size_t best_k = static_cast<std::size_t>(lo);
        std::complex<double> best = bin(best_k);
        for (long long k = lo + 1; k <= hi; ++k) {
            const std::complex<double> v = bin(static_cast<std::size_t>(k));
            if (std::abs(v) > std::abs(best)) {
                best = v;
                best_k = static_cast<std::size_t>(k);
            }
        }
        const double amps_rms = std::abs(best) * 2.0 / coherent_sum / std::sqrt(2.0);
        double phase = std::arg(best) + std::numbers::pi / 2.0; // sine-referenced
        if (phase > std::numbers::pi) phase -= kTwoPi;
        spectrum.set(h, amps_rms, phase);
    }
    return spectrum;
}

} // namespace gridharm::spectral
