#pragma once

#include "gridharm/signal.hpp"

namespace gridharm::xfmr {

/// Lumped thermal model. alpha*A never appears separately in any computed
/// quantity, so the emissivity-area product is stored as one coefficient.
struct ThermalSpec {
    double mass_kg = 0.0;
    double specific_heat_j_per_kg_k = 0.0;
    double emissivity_area_w_per_k = 0.0;
    double time_constant_s = 0.0;

    /// True when time_constant_s agrees with mass*c/(alpha*A) within 1%.
    /// Disagreement is reported, not rejected; users may have measured the
    /// time constant independently.
    bool tau_consistent() const;

    /// Derives the time constant from the physical parameters.
    static ThermalSpec from_physical(double mass_kg, double specific_heat,
                                     double emissivity_area);

    void validate() const;
};

struct TransformerSpec {
    double rated_current_a = 104.17; // 25 kVA service unit at 240 V
    double r_dc_ohm = 0.02;
    double p_ec_r = 0.05;            // rated winding eddy loss, per unit of I^2*R
    double no_load_loss_w = 80.0;
    double stray_loss_w = 40.0;
    ThermalSpec thermal{150.0, 450.0, 18.75, 3600.0};

    void validate() const;
};

struct EddyLoss {
    double dc_watts = 0.0;       // I1^2 * R_DC
    double harmonic_watts = 0.0; // sum I_h^2 h^2 * P_EC-R * R_DC
    double per_unit = 0.0;       // P_EC-R * sum(I_h^2 h^2) / sum(I_h^2)
    double watts() const { return dc_watts + harmonic_watts; }
};

struct DeratingReport {
    double thd = 0.0;            // fraction
    double eddy_watts = 0.0;
    double eddy_per_unit = 0.0;
    double f_hl = 1.0;
    double total_loss_w = 0.0;
    double theta_final_k = 0.0;  // steady-state temperature rise
    double derating = 1.0;       // fraction of rated capacity, (0, 1]
};

/// Total harmonic distortion: sqrt(sum_{h>=2} I_h^2) / I_1.
double thd(const HarmonicSpectrum& s);

/// Winding eddy loss split into the non-frequency I1^2*R_DC part and the
/// h^2-weighted part, plus the per-unit form normalized by total RMS^2 so a
/// pure fundamental reports exactly p_ec_r.
EddyLoss eddy_loss(const HarmonicSpectrum& s, const TransformerSpec& t);

/// Harmonic loss factor: sum(I_h^2 h^2) / sum(I_h^2). Computed as
/// 1 + sum(I_h^2 (h^2-1))/sum(I_h^2) so it can never round below 1.
double f_hl(const HarmonicSpectrum& s);

/// Maximum per-unit RMS loading that keeps total winding loss at its rated
/// linear-load value: sqrt((1 + P_EC-R) / (1 + F_HL * P_EC-R)).
double derating(double f_hl, const TransformerSpec& t);

/// No-load + eddy + structural stray losses, watts.
double total_loss(const HarmonicSpectrum& s, const TransformerSpec& t);

/// Temperature rise above ambient after t seconds of constant dissipation:
/// theta_final * (1 - exp(-t/tau)), theta_final = P/(alpha*A).
/// t = +infinity returns theta_final.
double theta_rise(double power_w, const ThermalSpec& th, double t_s);

/// Full metric set for a spectrum.
DeratingReport derating_report(const HarmonicSpectrum& s, const TransformerSpec& t);

} // namespace gridharm::xfmr
