#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridharm/loadsim.hpp"
#include "gridharm/spectral.hpp"
#include "gridharm/xfmr.hpp"

namespace gridharm::scenario {

enum class PeakTime { Evening, Day };

/// Reference metrics bundled for side-by-side display in reports. They are
/// comparison data only and are never asserted against computed results.
struct ReferenceMetrics {
    double thd_pct = 0.0;
    double eddy_pct = 0.0;
    double derating_pct = 0.0;
};

struct ScenarioDef {
    std::string id;
    int pv_units = 0;
    PeakTime peak_time = PeakTime::Evening;
    double pv_kw_per_unit = 1.5; // 1.5 kW evening, 3.5 kW day
    std::vector<loadsim::House> houses;
    double expected_net_load_kw = 0.0;
    std::optional<ReferenceMetrics> reference;

    double total_load_kw() const;
    void validate() const;
};

struct ScenarioResult {
    std::string id;
    HarmonicSpectrum spectrum; // measured through the synthesis/analysis path
    xfmr::DeratingReport report;
    double net_load_kw = 0.0;  // signed; negative means reverse power flow
    std::optional<ReferenceMetrics> reference;
};

struct RunConfig {
    double synth_duration_s = 0.5;   // 30 fundamental periods at the defaults
    double sample_rate_hz = 20000.0;
    double nominal_voltage_v = 240.0;
    std::optional<loadsim::LoadSignature> pv_signature; // defaults to the stock PV unit
};

/// The five stock peak-load scenarios: evening peaks with 0/1/2 PV units at
/// 1.5 kW each over a 9.5 kW appliance mix, and two daytime reverse-flow
/// peaks with 3/4 units at 3.5 kW over a 2.5 kW mix.
std::vector<ScenarioDef> builtin_scenarios();

/// Aggregates the house spectra, synthesizes the secondary current over an
/// integer number of fundamental periods, re-analyzes it, and computes the
/// full metric set. The synthesis/re-analysis detour exercises the
/// measurement path rather than reusing the aggregate spectrum.
ScenarioResult run(const ScenarioDef& def, const xfmr::TransformerSpec& t,
                   const spectral::SpectralConfig& cfg, const RunConfig& rc = {});

/// Runs every definition in order; results are deterministic and returned
/// in input order.
std::vector<ScenarioResult> run_all(std::span<const ScenarioDef> defs,
                                    const xfmr::TransformerSpec& t,
                                    const spectral::SpectralConfig& cfg,
                                    const RunConfig& rc = {});

/// Fixed-width text table (computed vs reference metrics plus normalized
/// h3/h5 fractions), 6 significant digits.
std::string comparison_table(std::span<const ScenarioResult> results);

} // namespace gridharm::scenario
