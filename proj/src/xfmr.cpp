#include "gridharm/xfmr.hpp"

#include <cmath>
#include <limits>

namespace gridharm::xfmr {

bool ThermalSpec::tau_consistent() const {
    const double derived = mass_kg * specific_heat_j_per_kg_k / emissivity_area_w_per_k;
    return std::abs(time_constant_s - derived) <= 0.01 * derived;
}

ThermalSpec ThermalSpec::from_physical(double mass_kg, double specific_heat,
                                       double emissivity_area) {
    ThermalSpec th{mass_kg, specific_heat, emissivity_area,
                   mass_kg * specific_heat / emissivity_area};
    th.validate();
    return th;
}

void ThermalSpec::validate() const {
    if (!(mass_kg > 0.0) || !(specific_heat_j_per_kg_k > 0.0) ||
        !(emissivity_area_w_per_k > 0.0) || !(time_constant_s > 0.0))
        throw Error(errc::invalid_argument, "thermal parameters must all be positive");
}

void TransformerSpec::validate() const {
    if (!(rated_current_a > 0.0))
        throw Error(errc::invalid_argument, "rated current must be positive");
    if (r_dc_ohm < 0.0)
        throw Error(errc::invalid_argument, "dc winding resistance must be non-negative");
    if (p_ec_r < 0.0 || p_ec_r > 0.15)
        throw Error(errc::invalid_argument, "p_ec_r must lie in [0, 0.15]");
    if (no_load_loss_w < 0.0 || stray_loss_w < 0.0)
        throw Error(errc::invalid_argument, "loss constants must be non-negative");
    thermal.validate();
}

double thd(const HarmonicSpectrum& s) {
    const double i1 = s.magnitude(1);
    if (!(i1 > 0.0))
        throw Error(errc::undefined_thd, "THD undefined: missing or zero fundamental");
    double harm_sq = 0.0;
    for (const auto& c : s.components())
        if (c.order >= 2) harm_sq += c.amps_rms * c.amps_rms;
    return std::sqrt(harm_sq) / i1;
}

EddyLoss eddy_loss(const HarmonicSpectrum& s, const TransformerSpec& t) {
    double sum_sq = 0.0;
    double sum_sq_h2 = 0.0;
    double excess = 0.0; // sum I_h^2 (h^2 - 1)
    for (const auto& c : s.components()) {
        const double sq = c.amps_rms * c.amps_rms;
        const double h2 = static_cast<double>(c.order) * static_cast<double>(c.order);
        sum_sq += sq;
        sum_sq_h2 += sq * h2;
        excess += sq * (h2 - 1.0);
    }
    EddyLoss out;
    const double i1 = s.magnitude(1);
    out.dc_watts = i1 * i1 * t.r_dc_ohm;
    out.harmonic_watts = t.p_ec_r * t.r_dc_ohm * sum_sq_h2;
    out.per_unit = sum_sq > 0.0 ? t.p_ec_r * (1.0 + excess / sum_sq) : 0.0;
    return out;
}

double f_hl(const HarmonicSpectrum& s) {
    double sum_sq = 0.0;
    double excess = 0.0;
    for (const auto& c : s.components()) {
        const double sq = c.amps_rms * c.amps_rms;
        const double h2 = static_cast<double>(c.order) * static_cast<double>(c.order);
        sum_sq += sq;
        excess += sq * (h2 - 1.0);
    }
    if (!(sum_sq > 0.0))
        throw Error(errc::invalid_argument, "harmonic loss factor undefined for all-zero spectrum");
    return 1.0 + excess / sum_sq;
}

double derating(double f_hl, const TransformerSpec& t) {
    if (f_hl < 1.0)
        throw Error(errc::invalid_argument,
                    "harmonic loss factor below 1 (" + std::to_string(f_hl) +
                        "): spectrum is not fundamental-dominated");
    if (t.p_ec_r < 0.0)
        throw Error(errc::invalid_argument, "p_ec_r must be non-negative");
    return std::sqrt((1.0 + t.p_ec_r) / (1.0 + f_hl * t.p_ec_r));
}

double total_loss(const HarmonicSpectrum& s, const TransformerSpec& t) {
    return t.no_load_loss_w + eddy_loss(s, t).watts() + t.stray_loss_w;
}

double theta_rise(double power_w, const ThermalSpec& th, double t_s) {
    th.validate();
    if (t_s < 0.0)
        throw Error(errc::invalid_argument, "time must be non-negative");
    if (power_w < 0.0)
        throw Error(errc::invalid_argument, "power must be non-negative");
    const double theta_final = power_w / th.emissivity_area_w_per_k;
    if (std::isinf(t_s)) return theta_final;
    return theta_final * (1.0 - std::exp(-t_s / th.time_constant_s));
}

DeratingReport derating_report(const HarmonicSpectrum& s, const TransformerSpec& t) {
    t.validate();
    DeratingReport r;
    r.thd = thd(s);
    const EddyLoss e = eddy_loss(s, t);
    r.eddy_watts = e.watts();
    r.eddy_per_unit = e.per_unit;
    r.f_hl = f_hl(s);
    r.total_loss_w = total_loss(s, t);
    r.theta_final_k = theta_rise(r.total_loss_w, t.thermal,
                                 std::numeric_limits<double>::infinity());
    r.derating = derating(r.f_hl, t);
    return r;
}

} // namespace gridharm::xfmr
