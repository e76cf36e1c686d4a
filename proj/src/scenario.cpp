#include "gridharm/scenario.hpp"

#include <cmath>
#include <complex>
#include <cstdio>

namespace gridharm::scenario {

double ScenarioDef::total_load_kw() const {
    double kw = 0.0;
    for (const auto& house : houses) kw += house.load_kw();
    return kw;
}

void ScenarioDef::validate() const {
    if (id.empty())
        throw Error(errc::config, "scenario needs an id");
    if (pv_units < 0)
        throw Error(errc::config, "scenario '" + id + "': pv_units must be non-negative");

    const double expected_rate = peak_time == PeakTime::Evening ? 1.5 : 3.5;
    if (std::abs(pv_kw_per_unit - expected_rate) > 1e-9)
        throw Error(errc::config, "scenario '" + id + "': pv_kw_per_unit must be " +
                                      std::to_string(expected_rate) + " kW for this peak time");

    int house_pv = 0;
    for (const auto& house : houses) {
        if (house.pv_units < 0)
            throw Error(errc::config, "scenario '" + id + "': house pv_units must be non-negative");
        house_pv += house.pv_units;
        for (const auto& [sig, count] : house.appliances) {
            if (count < 0)
                throw Error(errc::config, "scenario '" + id + "': appliance counts must be non-negative");
            sig.validate();
        }
    }
    if (house_pv != pv_units)
        throw Error(errc::config, "scenario '" + id + "': house pv units sum to " +
                                      std::to_string(house_pv) + ", expected " +
                                      std::to_string(pv_units));

    const double net = total_load_kw() - pv_units * pv_kw_per_unit;
    if (std::abs(net - expected_net_load_kw) > 1e-6)
        throw Error(errc::config, "scenario '" + id + "': expected net load " +
                                      std::to_string(expected_net_load_kw) +
                                      " kW does not match houses (" + std::to_string(net) + " kW)");
}

namespace {

loadsim::House evening_house(const loadsim::LoadSignature& desktop,
                             const loadsim::LoadSignature& laptop,
                             const loadsim::LoadSignature& vfd, int n_vfd, int n_desktop,
                             int n_laptop, int pv) {
    loadsim::House h;
    h.appliances = {{vfd, n_vfd}, {desktop, n_desktop}, {laptop, n_laptop}};
    h.pv_units = pv;
    return h;
}

loadsim::House day_house(const loadsim::LoadSignature& desktop,
                         const loadsim::LoadSignature& laptop, int n_desktop, int n_laptop,
                         int pv) {
    loadsim::House h;
    h.appliances = {{desktop, n_desktop}, {laptop, n_laptop}};
    h.pv_units = pv;
    return h;
}

} // namespace

std::vector<ScenarioDef> builtin_scenarios() {
    const auto sigs = loadsim::builtin_signatures();
    const auto& desktop = sigs[0];
    const auto& laptop = sigs[1];
    const auto& vfd = sigs[2];

    // Evening mix: 3 VFD units (4.5 kW), 12 desktops (3 kW), 20 laptop
    // chargers (2 kW) over 5 houses = 9.5 kW. PV units fill houses in order.
    auto evening_houses = [&](int pv1, int pv2) {
        return std::vector<loadsim::House>{
            evening_house(desktop, laptop, vfd, 1, 3, 4, pv1),
            evening_house(desktop, laptop, vfd, 1, 2, 4, pv2),
            evening_house(desktop, laptop, vfd, 1, 3, 4, 0),
            evening_house(desktop, laptop, vfd, 0, 2, 4, 0),
            evening_house(desktop, laptop, vfd, 0, 2, 4, 0),
        };
    };
    // Daytime mix: 8 desktops (2 kW) and 5 laptop chargers (0.5 kW) = 2.5 kW.
    auto day_houses = [&](int pv4) {
        return std::vector<loadsim::House>{
            day_house(desktop, laptop, 2, 1, 1),
            day_house(desktop, laptop, 2, 1, 1),
            day_house(desktop, laptop, 2, 1, 1),
            day_house(desktop, laptop, 1, 1, pv4),
            day_house(desktop, laptop, 1, 1, 0),
        };
    };

    std::vector<ScenarioDef> defs(5);
    defs[0] = {"scenario-1", 0, PeakTime::Evening, 1.5, evening_houses(0, 0), 9.5,
               ReferenceMetrics{18.30, 6.89, 85.59}};
    defs[1] = {"scenario-2", 1, PeakTime::Evening, 1.5, evening_houses(1, 0), 8.0,
               ReferenceMetrics{26.51, 8.66, 78.59}};
    defs[2] = {"scenario-3", 2, PeakTime::Evening, 1.5, evening_houses(1, 1), 6.5,
               ReferenceMetrics{29.05, 9.41, 75.88}};
    defs[3] = {"scenario-4", 3, PeakTime::Day, 3.5, day_houses(0), -8.0,
               ReferenceMetrics{5.55, 5.22, 98.01}};
    defs[4] = {"scenario-5", 4, PeakTime::Day, 3.5, day_houses(1), -11.5,
               ReferenceMetrics{3.52, 5.11, 98.95}};
    for (const auto& d : defs) d.validate();
    return defs;
}

ScenarioResult run(const ScenarioDef& def, const xfmr::TransformerSpec& t,
                   const spectral::SpectralConfig& cfg, const RunConfig& rc) {
    def.validate();
    t.validate();

    const loadsim::LoadSignature pv =
        rc.pv_signature ? *rc.pv_signature : loadsim::builtin_pv(rc.nominal_voltage_v);

    const HarmonicSpectrum agg = loadsim::aggregate(def.houses, def.pv_kw_per_unit, pv);
    const double net_load_kw =
        rc.nominal_voltage_v * std::real(agg.phasor(1)) / 1000.0;

    const Waveform wave = synthesize(agg, rc.synth_duration_s, rc.sample_rate_hz);
    const HarmonicSpectrum measured = spectral::analyze(wave, cfg);
    const xfmr::DeratingReport report = xfmr::derating_report(measured, t);

    return ScenarioResult{def.id, measured, report, net_load_kw, def.reference};
}

std::vector<ScenarioResult> run_all(std::span<const ScenarioDef> defs,
                                    const xfmr::TransformerSpec& t,
                                    const spectral::SpectralConfig& cfg, const RunConfig& rc) {
    std::vector<ScenarioResult> results;
    results.reserve(defs.size());
    for (const auto& def : defs) results.push_back(run(def, t, cfg, rc));
    return results;
}

std::string comparison_table(std::span<const ScenarioResult> results) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %10s %9s %8s %9s %8s %8s %10s %8s %8s\n",
                  "scenario", "net_kw", "thd_%", "(ref)", "eddy_%", "(ref)", "f_hl",
                  "derate_%", "(ref)", "h3/h1");
    out += line;
    for (const auto& r : results) {
        const double h1 = r.spectrum.magnitude(1);
        const double h3_frac = h1 > 0.0 ? r.spectrum.magnitude(3) / h1 : 0.0;
        auto ref = [&](double ReferenceMetrics::*field) {
            char buf[32];
            if (r.reference)
                std::snprintf(buf, sizeof buf, "%.6g", (*r.reference).*field);
            else
                std::snprintf(buf, sizeof buf, "-");
            return std::string(buf);
        };
        std::snprintf(line, sizeof line,
                      "%-12s %10.6g %9.6g %8s %9.6g %8s %8.6g %10.6g %8s %8.6g\n",
                      r.id.c_str(), r.net_load_kw, 100.0 * r.report.thd,
                      ref(&ReferenceMetrics::thd_pct).c_str(), 100.0 * r.report.eddy_per_unit,
                      ref(&ReferenceMetrics::eddy_pct).c_str(), r.report.f_hl,
                      100.0 * r.report.derating, ref(&ReferenceMetrics::derating_pct).c_str(),
                      h3_frac);
        out += line;
    }
    return out;
}

} // namespace gridharm::scenario
