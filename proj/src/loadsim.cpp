#include "gridharm/loadsim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "gridharm/xfmr.hpp"

namespace gridharm::loadsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPvThdLimit = 0.05; // interconnection standards cap PV current THD at 5%
} // namespace

HarmonicSpectrum LoadSignature::spectrum_at(double kw) const {
    HarmonicSpectrum out(spectrum_per_kw.fundamental_hz());
    for (const auto& c : spectrum_per_kw.components())
        out.set(c.order, c.amps_rms * kw, c.phase_rad);
    return out;
}

double LoadSignature::own_thd() const {
    return xfmr::thd(spectrum_per_kw);
}

void LoadSignature::validate() const {
    if (name.empty())
        throw Error(errc::config, "signature needs a name");
    if (!(rated_power_kw >= 0.0) || !std::isfinite(rated_power_kw))
        throw Error(errc::config, "signature '" + name + "': rated power must be non-negative");
    if (!(spectrum_per_kw.magnitude(1) > 0.0))
        throw Error(errc::config, "signature '" + name + "': fundamental entry must be positive");
    for (const auto& c : spectrum_per_kw.components())
        if (!std::isfinite(c.amps_rms) || c.amps_rms < 0.0)
            throw Error(errc::config, "signature '" + name + "': harmonic magnitudes must be finite");
    if (kind == SignatureKind::Generator && own_thd() >= kPvThdLimit)
        throw Error(errc::config, "signature '" + name + "': generator THD must stay below 5%");
}

double House::load_kw() const {
    double kw = 0.0;
    for (const auto& [sig, count] : appliances) kw += sig.rated_power_kw * count;
    return kw;
}

namespace {

LoadSignature make_signature(const std::string& name, double rated_kw, SignatureKind kind,
                             double nominal_voltage_v, double fundamental_hz,
                             const std::vector<std::pair<int, double>>& fractions) {
    const double amps_per_kw = 1000.0 / nominal_voltage_v;
    LoadSignature sig;
    sig.name = name;
    sig.rated_power_kw = rated_kw;
    sig.kind = kind;
    sig.spectrum_per_kw = HarmonicSpectrum(fundamental_hz);
    const double fund_phase = kind == SignatureKind::Generator ? std::numbers::pi : 0.0;
    sig.spectrum_per_kw.set(1, amps_per_kw, fund_phase);
    for (const auto& [order, fraction] : fractions)
        sig.spectrum_per_kw.set(order, amps_per_kw * fraction, fund_phase);
    sig.validate();
    return sig;
}

} // namespace

std::vector<LoadSignature> builtin_signatures(double nominal_voltage_v, double fundamental_hz) {
    std::vector<LoadSignature> sigs;
    sigs.push_back(make_signature(
        "desktop", 0.25, SignatureKind::Load, nominal_voltage_v, fundamental_hz,
        {{3, 0.155}, {5, 0.091}, {7, 0.049}, {9, 0.021}, {11, 0.0105}, {13, 0.0056}}));
    sigs.push_back(make_signature(
        "laptop", 0.10, SignatureKind::Load, nominal_voltage_v, fundamental_hz,
        {{3, 0.126}, {5, 0.077}, {7, 0.042}, {9, 0.0175}, {11, 0.0084}}));
    sigs.push_back(make_signature(
        "vfd", 1.50, SignatureKind::Load, nominal_voltage_v, fundamental_hz,
        {{3, 0.20}, {5, 0.065}, {7, 0.030}, {9, 0.014}, {11, 0.007}}));
    sigs.push_back(make_signature("pv", 3.50, SignatureKind::Generator, nominal_voltage_v,
                                  fundamental_hz, {}));
    return sigs;
}

LoadSignature builtin_pv(double nominal_voltage_v, double fundamental_hz) {
    return make_signature("pv", 3.50, SignatureKind::Generator, nominal_voltage_v,
                          fundamental_hz, {});
}

HarmonicSpectrum aggregate(std::span<const House> houses, double pv_output_kw_per_unit,
                           const LoadSignature& pv_signature) {
    if (pv_output_kw_per_unit < 0.0)
        throw Error(errc::invalid_argument, "PV output per unit must be non-negative");

    double fundamental_hz = 0.0;
    for (const auto& house : houses) {
        for (const auto& [sig, count] : house.appliances) {
            if (count > 0) {
                fundamental_hz = sig.spectrum_per_kw.fundamental_hz();
                break;
            }
        }
        if (fundamental_hz > 0.0) break;
    }
    if (fundamental_hz <= 0.0) fundamental_hz = pv_signature.spectrum_per_kw.fundamental_hz();

    // ordered accumulation keeps results bit-reproducible
    std::map<int, std::complex<double>> acc;
    auto add_scaled = [&acc](const LoadSignature& sig, double kw) {
        for (const auto& c : sig.spectrum_per_kw.components())
            acc[c.order] += std::polar(c.amps_rms * kw, c.phase_rad);
    };

    for (const auto& house : houses) {
        for (const auto& [sig, count] : house.appliances) {
            if (count < 0)
                throw Error(errc::invalid_argument, "appliance counts must be non-negative");
            if (count > 0) add_scaled(sig, sig.rated_power_kw * count);
        }
        if (house.pv_units < 0)
            throw Error(errc::invalid_argument, "pv unit counts must be non-negative");
        if (house.pv_units > 0 && pv_output_kw_per_unit > 0.0)
            add_scaled(pv_signature, pv_output_kw_per_unit * house.pv_units);
    }

    HarmonicSpectrum out(fundamental_hz > 0.0 ? fundamental_hz : 60.0);
    for (const auto& [order, phasor] : acc)
        out.set(order, std::abs(phasor), std::arg(phasor));
    return out;
}

void RectifierParams::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(source_rms_voltage_v))
        throw Error(errc::invalid_argument, "source voltage must be positive");
    if (!positive(source_frequency_hz))
        throw Error(errc::invalid_argument, "source frequency must be positive");
    if (!positive(source_resistance_ohm) || !positive(source_inductance_h))
        throw Error(errc::invalid_argument, "source impedance must be positive");
    if (!positive(dc_capacitance_f) || !positive(dc_load_resistance_ohm))
        throw Error(errc::invalid_argument, "dc-link parameters must be positive");
    if (!positive(timestep_s))
        throw Error(errc::invalid_argument, "timestep must be positive");
    if (timestep_s > 1.0 / (20.0 * source_frequency_hz))
        throw Error(errc::invalid_argument, "timestep too coarse: needs at least 20 steps per period");
    if (!positive(duration_s))
        throw Error(errc::invalid_argument, "duration must be positive");
    if (discard_periods < 0)
        throw Error(errc::invalid_argument, "discard periods must be non-negative");
}

namespace {

enum class BridgeMode { Block, Positive, Negative };

struct StepResult {
    double i = 0.0;
    double v = 0.0;
};

// One trapezoidal step of the assumed bridge topology.
StepResult solve_step(BridgeMode mode, double i0, double v0, double vs0, double vs1,
                      const RectifierParams& p) {
    const double h = p.timestep_s;
    if (mode == BridgeMode::Block) {
        const double d = h / (2.0 * p.dc_load_resistance_ohm * p.dc_capacitance_f);
        return {0.0, v0 * (1.0 - d) / (1.0 + d)};
    }
    const double s = mode == BridgeMode::Positive ? 1.0 : -1.0;
    const double a = h * p.source_resistance_ohm / (2.0 * p.source_inductance_h);
    const double b = h / (2.0 * p.source_inductance_h);
    const double c = h / (2.0 * p.dc_capacitance_f);
    const double d = h / (2.0 * p.dc_load_resistance_ohm * p.dc_capacitance_f);

    // [1+a   b*s] [i1]   [(1-a) i0 - b s v0 + b (vs0+vs1)]
    // [-c*s  1+d] [v1] = [ c s i0 + (1-d) v0             ]
    const double a11 = 1.0 + a, a12 = b * s;
    const double a21 = -c * s, a22 = 1.0 + d;
    const double r1 = (1.0 - a) * i0 - b * s * v0 + b * (vs0 + vs1);
    const double r2 = c * s * i0 + (1.0 - d) * v0;
    const double det = a11 * a22 - a12 * a21;
    return {(r1 * a22 - a12 * r2) / det, (a11 * r2 - r1 * a21) / det};
}

BridgeMode consistent_mode(BridgeMode mode, const StepResult& x, double vs1) {
    switch (mode) {
    case BridgeMode::Positive:
        return x.i < 0.0 ? BridgeMode::Block : BridgeMode::Positive;
    case BridgeMode::Negative:
        return x.i > 0.0 ? BridgeMode::Block : BridgeMode::Negative;
    case BridgeMode::Block:
        if (std::abs(vs1) > x.v)
            return vs1 > 0.0 ? BridgeMode::Positive : BridgeMode::Negative;
        return BridgeMode::Block;
    }
    return BridgeMode::Block;
}

} // namespace

Waveform simulate_rectifier(const RectifierParams& p, RectifierDiagnostics* diag) {
    p.validate();

    const double h = p.timestep_s;
    const double vpk = std::sqrt(2.0) * p.source_rms_voltage_v;
    const double w = kTwoPi * p.source_frequency_hz;
    const auto steps = static_cast<std::size_t>(std::llround(p.duration_s / h));
    constexpr int kMaxModeIterations = 20;

    RectifierDiagnostics local;
    RectifierDiagnostics& d = diag ? *diag : local;
    d = RectifierDiagnostics{};
    d.discarded_periods = p.discard_periods;
    d.steps = steps;

    std::vector<double> line_current;
    line_current.reserve(steps + 1);
    line_current.push_back(0.0);

    double i = 0.0, v = 0.0;
    BridgeMode mode = BridgeMode::Block;

    for (std::size_t n = 0; n < steps; ++n) {
        const double t0 = static_cast<double>(n) * h;
        const double vs0 = vpk * std::sin(w * t0);
        const double vs1 = vpk * std::sin(w * (t0 + h));

        BridgeMode trial = mode;
        bool tried[3] = {false, false, false};
        StepResult x;
        int iter = 0;
        for (;; ++iter) {
            if (iter >= kMaxModeIterations)
                throw Error(errc::convergence,
                            "diode state did not settle within 20 iterations at t = " +
                                std::to_string(t0) + " s (timestep " + std::to_string(h) + " s)");
            tried[static_cast<int>(trial)] = true;
            x = solve_step(trial, i, v, vs0, vs1, p);
            const BridgeMode next = consistent_mode(trial, x, vs1);
            if (next == trial) break;
            if (tried[static_cast<int>(next)]) {
                // block/conduct disagreement within one step: the diode stays
                // off until the average forward drive carries the whole step
                trial = BridgeMode::Block;
                x = solve_step(trial, i, v, vs0, vs1, p);
                break;
            }
            trial = next;
        }
        d.max_mode_iterations = std::max(d.max_mode_iterations, iter + 1);
        if (trial != mode) ++d.mode_switches;
        mode = trial;
        i = x.i;
        v = x.v;
        if (std::abs(i) > 1e6)
            throw Error(errc::divergence, "line current diverged beyond 1e6 A at t = " +
                                              std::to_string(t0 + h) + " s");
        line_current.push_back(i);
    }

    const double period = 1.0 / p.source_frequency_hz;
    const auto first_kept = static_cast<std::size_t>(
        std::ceil(p.discard_periods * period / h - 1e-9));
    if (first_kept + 2 > line_current.size())
        throw Error(errc::invalid_argument,
                    "duration leaves fewer than 2 samples after discarding " +
                        std::to_string(p.discard_periods) + " startup periods");

    std::vector<double> kept(line_current.begin() + static_cast<std::ptrdiff_t>(first_kept),
                             line_current.end());
    return Waveform(std::move(kept), 1.0 / h, p.source_frequency_hz);
}

} // namespace gridharm::loadsim
