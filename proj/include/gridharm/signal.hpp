#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "gridharm/error.hpp"

namespace gridharm {

/// Uniformly sampled current waveform. Instantaneous amperes on a time grid
/// starting at t = 0 with spacing 1/sample_rate_hz.
struct Waveform {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    double fundamental_hz = 0.0;

    Waveform() = default;
    Waveform(std::vector<double> s, double sample_rate, double fundamental);

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

struct HarmonicComponent {
    int order = 0;          // positive integer multiple of the fundamental
    double amps_rms = 0.0;  // magnitude, amperes RMS
    double phase_rad = 0.0; // sine-referenced phase
};

/// Sparse harmonic spectrum: RMS magnitude and phase per integer order.
/// Magnitudes are RMS, not peak; loss formulas consume I^2 directly and
/// synthesis multiplies by sqrt(2).
class HarmonicSpectrum {
public:
    HarmonicSpectrum() = default;
    explicit HarmonicSpectrum(double fundamental_hz);

    /// Insert or overwrite the entry at `order`. Magnitude must be finite
    /// and non-negative; phase defaults to 0 when unspecified.
    void set(int order, double amps_rms, double phase_rad = 0.0);

    /// Phasor-accumulate into the entry at `order` (complex amperes RMS,
    /// sine-referenced). Creates the entry if absent.
    void add_phasor(int order, std::complex<double> amps);

    bool contains(int order) const;
    double magnitude(int order) const; // 0 when absent
    double phase(int order) const;     // 0 when absent
    std::complex<double> phasor(int order) const;

    int h_max() const; // largest order present, 0 when empty
    bool empty() const { return components_.empty(); }
    const std::vector<HarmonicComponent>& components() const { return components_; }
    double fundamental_hz() const { return fundamental_hz_; }

private:
    double fundamental_hz_ = 0.0;
    std::vector<HarmonicComponent> components_; // sorted by order, unique
};

/// Sum of sqrt(2)*|I_h|*sin(2*pi*h*f1*t + phi_h) on a uniform grid from t = 0.
/// Rejects harmonics at or above Nyquist and non-positive durations.
Waveform synthesize(const HarmonicSpectrum& spectrum, double duration_s, double sample_rate_hz);

/// Root mean square of the samples.
double rms(const Waveform& w);

} // namespace gridharm
