#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gridharm/signal.hpp"

namespace gridharm::spectral {

enum class Window {
    None, // rectangular; the default analysis path
    Hann, // optional, off by default
};

struct SpectralConfig {
    int h_max = 15;          // highest harmonic order extracted
    int scan_halfwidth = 2;  // bins searched either side of each harmonic bin
    Window window = Window::None;
};

/// Direct evaluation of X[k] = sum_n x[n] * exp(-j*2*pi*k*n/N) for all k.
/// O(N^2); kept as the reference path the fast transform is checked against.
std::vector<std::complex<double>> dft_direct(std::span<const double> x);

/// Single bin of the same transform, compensated summation.
std::complex<double> dft_bin(std::span<const double> x, std::size_t k);

/// Iterative radix-2 transform with precomputed twiddle factors.
/// Input length must be a power of two; other lengths are rejected and the
/// caller is expected to slice via prepared_length().
std::vector<std::complex<double>> fft(std::span<const double> x);

/// Longest prefix of an n-sample capture that spans a whole number of
/// fundamental periods (nearest sample when the period is not an integer
/// number of samples). Throws when the capture is shorter than one period.
std::size_t prepared_length(std::size_t n, double sample_rate_hz, double fundamental_hz);

/// Harmonic extraction: for each order h the target bin is
/// round(h*f1*N/fs); the scan searches scan_halfwidth bins either side and
/// keeps the largest magnitude, converted to amperes RMS. The DC bin is
/// never scanned. Phases are taken at the selected bin, sine-referenced.
HarmonicSpectrum analyze(const Waveform& w, const SpectralConfig& cfg = {});

} // namespace gridharm::spectral
