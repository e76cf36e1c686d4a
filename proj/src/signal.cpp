#include "gridharm/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gridharm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Waveform::Waveform(std::vector<double> s, double sample_rate, double fundamental)
    : samples(std::move(s)), sample_rate_hz(sample_rate), fundamental_hz(fundamental) {
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw Error(errc::invalid_argument, "waveform sample rate must be positive");
    if (!(fundamental_hz > 0.0) || !std::isfinite(fundamental_hz))
        throw Error(errc::invalid_argument, "waveform fundamental must be positive");
    if (samples.size() < 2)
        throw Error(errc::invalid_argument, "waveform needs at least 2 samples");
}

HarmonicSpectrum::HarmonicSpectrum(double fundamental_hz) : fundamental_hz_(fundamental_hz) {
    if (!(fundamental_hz > 0.0) || !std::isfinite(fundamental_hz))
        throw Error(errc::invalid_argument, "spectrum fundamental must be positive");
}

void HarmonicSpectrum::set(int order, double amps_rms, double phase_rad) {
    if (order < 1)
        throw Error(errc::invalid_argument, "harmonic order must be a positive integer");
    if (!(amps_rms >= 0.0) || !std::isfinite(amps_rms))
        throw Error(errc::invalid_argument, "harmonic magnitude must be finite and non-negative");
    if (!std::isfinite(phase_rad))
        throw Error(errc::invalid_argument, "harmonic phase must be finite");

    auto it = std::lower_bound(components_.begin(), components_.end(), order,
                               [](const HarmonicComponent& c, int o) { return c.order < o; });
    if (it != components_.end() && it->order == order) {
        it->amps_rms = amps_rms;
        it->phase_rad = phase_rad;
    } else {
        components_.insert(it, HarmonicComponent{order, amps_rms, phase_rad});
    }
}

void HarmonicSpectrum::add_phasor(int order, std::complex<double> amps) {
    std::complex<double> total = phasor(order) + amps;
    set(order, std::abs(total), std::arg(total));
}

bool HarmonicSpectrum::contains(int order) const {
    auto it = std::lower_bound(components_.begin(), components_.end(), order,
                               [](const HarmonicComponent& c, int o) { return c.order < o; });
    return it != components_.end() && it->order == order;
}

double HarmonicSpectrum::magnitude(int order) const {
    auto it = std::lower_bound(components_.begin(), components_.end(), order,
                               [](const HarmonicComponent& c, int o) { return c.order < o; });
    return (it != components_.end() && it->order == order) ? it->amps_rms : 0.0;
}

double HarmonicSpectrum::phase(int order) const {
    auto it = std::lower_bound(components_.begin(), components_.end(), order,
                               [](const HarmonicComponent& c, int o) { return c.order < o; });
    return (it != components_.end() && it->order == order) ? it->phase_rad : 0.0;
}

std::complex<double> HarmonicSpectrum::phasor(int order) const {
    auto it = std::lower_bound(components_.begin(), components_.end(), order,
                               [](const HarmonicComponent& c, int o) { return c.order < o; });
    if (it == components_.end() || it->order != order) return {0.0, 0.0};
    return std::polar(it->amps_rms, it->phase_rad);
}

int HarmonicSpectrum::h_max() const {
    return components_.empty() ? 0 : components_.back().order;
}

Waveform synthesize(const HarmonicSpectrum& spectrum, double duration_s, double sample_rate_hz) {
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw Error(errc::invalid_argument, "synthesis duration must be positive");
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw Error(errc::invalid_argument, "synthesis sample rate must be positive");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (n < 2)
        throw Error(errc::invalid_argument, "duration * sample_rate must cover at least 2 samples");

    const double f1 = spectrum.fundamental_hz();
    for (const auto& c : spectrum.components()) {
        const double freq = c.order * f1;
        if (freq >= sample_rate_hz / 2.0)
            throw Error(errc::aliasing, "harmonic order " + std::to_string(c.order) + " at " +
                                            std::to_string(freq) + " Hz is at or above Nyquist");
    }

    std::vector<double> samples(n, 0.0);
    const double dt = 1.0 / sample_rate_hz;
    for (const auto& c : spectrum.components()) {
        if (c.amps_rms == 0.0) continue;
        const double amp = std::sqrt(2.0) * c.amps_rms;
        const double w = kTwoPi * c.order * f1;
        for (std::size_t i = 0; i < n; ++i)
            samples[i] += amp * std::sin(w * (static_cast<double>(i) * dt) + c.phase_rad);
    }
    // fundamental of an empty spectrum is unknown; keep the waveform valid for rms()
    const double fund = f1 > 0.0 ? f1 : 1.0;
    return Waveform(std::move(samples), sample_rate_hz, fund);
}

double rms(const Waveform& w) {
    if (w.samples.empty())
        throw Error(errc::invalid_argument, "rms of an empty waveform is undefined");
    double acc = 0.0;
    for (double x : w.samples) acc += x * x;
    return std::sqrt(acc / static_cast<double>(w.samples.size()));
}

} // namespace gridharm
