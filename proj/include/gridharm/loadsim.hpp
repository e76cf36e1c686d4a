#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridharm/signal.hpp"

namespace gridharm::loadsim {

enum class SignatureKind {
    Load,      // draws current, fundamental phase 0
    Generator, // injects current, fundamental phase pi (sign-reversed)
};

/// Per-appliance harmonic template, normalized to a 1 kW draw at nominal
/// voltage. Actual spectra scale linearly with power.
struct LoadSignature {
    std::string name;
    double rated_power_kw = 0.0;
    SignatureKind kind = SignatureKind::Load;
    HarmonicSpectrum spectrum_per_kw;

    /// Template scaled to `kw` of drawn (or generated) power.
    HarmonicSpectrum spectrum_at(double kw) const;

    /// THD of the template itself.
    double own_thd() const;

    void validate() const;
};

struct House {
    std::vector<std::pair<LoadSignature, int>> appliances; // (signature, count)
    int pv_units = 0;

    double load_kw() const;
};

/// Stock templates: desktop/home-entertainment (rectifier front end, rich
/// odd harmonics), laptop charger (flyback), VFD-driven motor loads
/// (dominant 3rd), and a PV inverter unit (filtered, fundamental-only
/// injection). Fractions are configuration data, not measurements; they are
/// chosen so the stock scenario suite reproduces the expected orderings.
std::vector<LoadSignature> builtin_signatures(double nominal_voltage_v = 240.0,
                                              double fundamental_hz = 60.0);

/// The PV entry of builtin_signatures().
LoadSignature builtin_pv(double nominal_voltage_v = 240.0, double fundamental_hz = 60.0);

/// Phasor sum of every appliance spectrum and PV injection across all
/// houses, in canonical order (house index, then appliance index, PV last
/// within each house). The fundamental may come out phase-reversed when PV
/// generation exceeds load (reverse power flow).
HarmonicSpectrum aggregate(std::span<const House> houses, double pv_output_kw_per_unit,
                           const LoadSignature& pv_signature);

/// Full-wave ideal-diode bridge with series source R-L feeding C || R_load.
struct RectifierParams {
    double source_rms_voltage_v = 240.0;
    double source_frequency_hz = 60.0;
    double source_resistance_ohm = 0.5;
    double source_inductance_h = 500e-6;
    double dc_capacitance_f = 470e-6;
    double dc_load_resistance_ohm = 60.0;
    double timestep_s = 50e-6; // 1/20 kHz
    double duration_s = 0.5;
    int discard_periods = 5;   // startup transient dropped from the output

    void validate() const;
};

struct RectifierDiagnostics {
    int max_mode_iterations = 0;  // worst per-step diode-state iteration count
    long mode_switches = 0;       // accepted conduction-state changes
    int discarded_periods = 0;
    std::size_t steps = 0;
};

/// Fixed-timestep trapezoidal integration with per-step diode-state
/// fixed-point iteration (ideal diodes, max 20 iterations per step).
/// Returns the line current after the startup transient, sampled at
/// 1/timestep.
Waveform simulate_rectifier(const RectifierParams& p, RectifierDiagnostics* diag = nullptr);

} // namespace gridharm::loadsim
