#include "gridharm/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace gridharm::config {

namespace {

double require_number(const Json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number())
        throw Error(errc::config, ctx + ": missing numeric field '" + key + "'");
    return j[key].get<double>();
}

double number_or(const Json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw Error(errc::config, "field '" + key + "' must be a number");
    return j[key].get<double>();
}

int int_or(const Json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer())
        throw Error(errc::config, "field '" + key + "' must be an integer");
    return j[key].get<int>();
}

loadsim::LoadSignature signature_from_json(const Json& j, double nominal_voltage_v,
                                           double fundamental_hz) {
    if (!j.contains("name") || !j["name"].is_string())
        throw Error(errc::config, "signature: missing string field 'name'");
    loadsim::LoadSignature sig;
    sig.name = j["name"].get<std::string>();
    const std::string ctx = "signature '" + sig.name + "'";
    sig.rated_power_kw = require_number(j, "rated_power_kw", ctx);
    const std::string kind = j.value("kind", std::string("load"));
    if (kind == "load")
        sig.kind = loadsim::SignatureKind::Load;
    else if (kind == "generator")
        sig.kind = loadsim::SignatureKind::Generator;
    else
        throw Error(errc::config, ctx + ": kind must be 'load' or 'generator'");

    const double amps_per_kw = number_or(j, "fundamental_amps_per_kw", 1000.0 / nominal_voltage_v);
    const double fund_phase =
        sig.kind == loadsim::SignatureKind::Generator ? std::numbers::pi : 0.0;
    sig.spectrum_per_kw = HarmonicSpectrum(fundamental_hz);
    sig.spectrum_per_kw.set(1, amps_per_kw, fund_phase);

    if (j.contains("harmonic_fractions")) {
        if (!j["harmonic_fractions"].is_object())
            throw Error(errc::config, ctx + ": harmonic_fractions must map order -> fraction");
        const Json phases = j.value("harmonic_phases_rad", Json::object());
        for (const auto& [key, value] : j["harmonic_fractions"].items()) {
            int order = 0;
            try {
                order = std::stoi(key);
            } catch (const std::exception&) {
                order = 0;
            }
            if (order < 2)
                throw Error(errc::config, ctx + ": harmonic order '" + key +
                                              "' must be an integer >= 2");
            if (!value.is_number() || !(value.get<double>() >= 0.0) ||
                !std::isfinite(value.get<double>()))
                throw Error(errc::config, ctx + ": fraction for order " + key +
                                              " must be a finite non-negative number");
            const double phase =
                phases.contains(key) ? phases[key].get<double>() : fund_phase;
            sig.spectrum_per_kw.set(order, amps_per_kw * value.get<double>(), phase);
        }
    }
    sig.validate();
    return sig;
}

Json signature_to_json(const loadsim::LoadSignature& sig) {
    Json j;
    j["name"] = sig.name;
    j["rated_power_kw"] = sig.rated_power_kw;
    j["kind"] = sig.kind == loadsim::SignatureKind::Generator ? "generator" : "load";
    j["fundamental_amps_per_kw"] = sig.spectrum_per_kw.magnitude(1);
    Json fractions = Json::object();
    const double fund = sig.spectrum_per_kw.magnitude(1);
    for (const auto& c : sig.spectrum_per_kw.components())
        if (c.order >= 2) fractions[std::to_string(c.order)] = c.amps_rms / fund;
    j["harmonic_fractions"] = fractions;
    return j;
}

scenario::ScenarioDef scenario_from_json(const Json& j, const ToolConfig& cfg) {
    scenario::ScenarioDef def;
    if (!j.contains("id") || !j["id"].is_string())
        throw Error(errc::config, "scenario: missing string field 'id'");
    def.id = j["id"].get<std::string>();
    const std::string ctx = "scenario '" + def.id + "'";
    def.pv_units = int_or(j, "pv_units", 0);
    const std::string peak = j.value("peak_time", std::string("evening"));
    if (peak == "evening")
        def.peak_time = scenario::PeakTime::Evening;
    else if (peak == "day")
        def.peak_time = scenario::PeakTime::Day;
    else
        throw Error(errc::config, ctx + ": peak_time must be 'evening' or 'day'");
    def.pv_kw_per_unit = number_or(
        j, "pv_kw_per_unit", def.peak_time == scenario::PeakTime::Evening ? 1.5 : 3.5);
    def.expected_net_load_kw = require_number(j, "expected_net_load_kw", ctx);

    if (!j.contains("houses") || !j["houses"].is_array())
        throw Error(errc::config, ctx + ": missing array field 'houses'");
    for (const auto& hj : j["houses"]) {
        loadsim::House house;
        house.pv_units = int_or(hj, "pv_units", 0);
        if (hj.contains("appliances")) {
            for (const auto& aj : hj["appliances"]) {
                if (!aj.contains("signature") || !aj["signature"].is_string())
                    throw Error(errc::config, ctx + ": appliance needs a 'signature' name");
                const auto& sig = cfg.signature(aj["signature"].get<std::string>());
                house.appliances.emplace_back(sig, int_or(aj, "count", 1));
            }
        }
        def.houses.push_back(std::move(house));
    }

    if (j.contains("reference")) {
        const Json& r = j["reference"];
        def.reference = scenario::ReferenceMetrics{
            require_number(r, "thd_pct", ctx + " reference"),
            require_number(r, "eddy_pct", ctx + " reference"),
            require_number(r, "derating_pct", ctx + " reference")};
    }
    def.validate();
    return def;
}

Json scenario_to_json(const scenario::ScenarioDef& def) {
    Json j;
    j["id"] = def.id;
    j["pv_units"] = def.pv_units;
    j["peak_time"] = def.peak_time == scenario::PeakTime::Evening ? "evening" : "day";
    j["pv_kw_per_unit"] = def.pv_kw_per_unit;
    j["expected_net_load_kw"] = def.expected_net_load_kw;
    Json houses = Json::array();
    for (const auto& house : def.houses) {
        Json hj;
        Json appliances = Json::array();
        for (const auto& [sig, count] : house.appliances)
            appliances.push_back(Json{{"signature", sig.name}, {"count", count}});
        hj["appliances"] = appliances;
        hj["pv_units"] = house.pv_units;
        houses.push_back(hj);
    }
    j["houses"] = houses;
    if (def.reference) {
        j["reference"] = Json{{"thd_pct", def.reference->thd_pct},
                              {"eddy_pct", def.reference->eddy_pct},
                              {"derating_pct", def.reference->derating_pct}};
    }
    return j;
}

} // namespace

const loadsim::LoadSignature& ToolConfig::signature(const std::string& name) const {
    for (const auto& sig : signatures)
        if (sig.name == name) return sig;
    throw Error(errc::config, "unknown signature '" + name + "'");
}

ToolConfig default_config() {
    ToolConfig cfg;
    cfg.signatures = loadsim::builtin_signatures(cfg.nominal_voltage_v, cfg.fundamental_hz);
    cfg.scenarios = scenario::builtin_scenarios();
    cfg.run.nominal_voltage_v = cfg.nominal_voltage_v;
    return cfg;
}

ToolConfig config_from_json(const Json& j) {
    ToolConfig cfg = default_config();
    if (!j.is_object())
        throw Error(errc::config, "configuration root must be a JSON object");
    if (j.contains("schema_version") && j["schema_version"].get<int>() != 1)
        throw Error(errc::config, "unsupported schema_version (expected 1)");

    cfg.fundamental_hz = number_or(j, "fundamental_hz", cfg.fundamental_hz);
    cfg.nominal_voltage_v = number_or(j, "nominal_voltage_v", cfg.nominal_voltage_v);
    cfg.run.nominal_voltage_v = cfg.nominal_voltage_v;

    if (j.contains("spectral")) {
        const Json& s = j["spectral"];
        cfg.spectral.h_max = int_or(s, "h_max", cfg.spectral.h_max);
        cfg.spectral.scan_halfwidth = int_or(s, "scan_halfwidth", cfg.spectral.scan_halfwidth);
        const std::string window = s.value("window", std::string("none"));
        if (window == "none")
            cfg.spectral.window = spectral::Window::None;
        else if (window == "hann")
            cfg.spectral.window = spectral::Window::Hann;
        else
            throw Error(errc::config, "spectral.window must be 'none' or 'hann'");
        if (cfg.spectral.h_max < 1 || cfg.spectral.scan_halfwidth < 0)
            throw Error(errc::config, "spectral: h_max >= 1 and scan_halfwidth >= 0 required");
    }

    if (j.contains("transformer")) {
        const Json& t = j["transformer"];
        cfg.transformer.rated_current_a =
            number_or(t, "rated_current_a", cfg.transformer.rated_current_a);
        cfg.transformer.r_dc_ohm = number_or(t, "r_dc_ohm", cfg.transformer.r_dc_ohm);
        cfg.transformer.p_ec_r = number_or(t, "p_ec_r", cfg.transformer.p_ec_r);
        cfg.transformer.no_load_loss_w =
            number_or(t, "no_load_loss_w", cfg.transformer.no_load_loss_w);
        cfg.transformer.stray_loss_w = number_or(t, "stray_loss_w", cfg.transformer.stray_loss_w);
        if (t.contains("thermal")) {
            const Json& th = t["thermal"];
            auto& thermal = cfg.transformer.thermal;
            thermal.mass_kg = number_or(th, "mass_kg", thermal.mass_kg);
            thermal.specific_heat_j_per_kg_k =
                number_or(th, "specific_heat_j_per_kg_k", thermal.specific_heat_j_per_kg_k);
            thermal.emissivity_area_w_per_k =
                number_or(th, "emissivity_area_w_per_k", thermal.emissivity_area_w_per_k);
            thermal.time_constant_s = number_or(th, "time_constant_s", thermal.time_constant_s);
        }
        cfg.transformer.validate();
    }

    if (j.contains("signatures")) {
        if (!j["signatures"].is_array())
            throw Error(errc::config, "'signatures' must be an array");
        cfg.signatures.clear();
        for (const auto& sj : j["signatures"])
            cfg.signatures.push_back(
                signature_from_json(sj, cfg.nominal_voltage_v, cfg.fundamental_hz));
    }

    if (j.contains("scenarios")) {
        if (!j["scenarios"].is_array())
            throw Error(errc::config, "'scenarios' must be an array");
        cfg.scenarios.clear();
        for (const auto& sj : j["scenarios"]) cfg.scenarios.push_back(scenario_from_json(sj, cfg));
    }

    if (j.contains("run")) {
        const Json& r = j["run"];
        cfg.run.synth_duration_s = number_or(r, "synth_duration_s", cfg.run.synth_duration_s);
        cfg.run.sample_rate_hz = number_or(r, "sample_rate_hz", cfg.run.sample_rate_hz);
        if (!(cfg.run.synth_duration_s > 0.0) || !(cfg.run.sample_rate_hz > 0.0))
            throw Error(errc::config, "run: duration and sample rate must be positive");
    }

    // run() resolves the PV signature from the configured set when present
    for (const auto& sig : cfg.signatures)
        if (sig.kind == loadsim::SignatureKind::Generator) cfg.run.pv_signature = sig;
    return cfg;
}

ToolConfig load_config(const std::string& path) {
    return config_from_json(parse_json(slurp(path), path));
}

Json config_to_json(const ToolConfig& cfg) {
    Json j;
    j["schema_version"] = 1;
    j["fundamental_hz"] = cfg.fundamental_hz;
    j["nominal_voltage_v"] = cfg.nominal_voltage_v;
    j["spectral"] = Json{
        {"h_max", cfg.spectral.h_max},
        {"scan_halfwidth", cfg.spectral.scan_halfwidth},
        {"window", cfg.spectral.window == spectral::Window::Hann ? "hann" : "none"}};
    j["transformer"] = Json{
        {"rated_current_a", cfg.transformer.rated_current_a},
        {"r_dc_ohm", cfg.transformer.r_dc_ohm},
        {"p_ec_r", cfg.transformer.p_ec_r},
        {"no_load_loss_w", cfg.transformer.no_load_loss_w},
        {"stray_loss_w", cfg.transformer.stray_loss_w},
        {"thermal",
         Json{{"mass_kg", cfg.transformer.thermal.mass_kg},
              {"specific_heat_j_per_kg_k", cfg.transformer.thermal.specific_heat_j_per_kg_k},
              {"emissivity_area_w_per_k", cfg.transformer.thermal.emissivity_area_w_per_k},
              {"time_constant_s", cfg.transformer.thermal.time_constant_s}}}};
    Json signatures = Json::array();
    for (const auto& sig : cfg.signatures) signatures.push_back(signature_to_json(sig));
    j["signatures"] = signatures;
    Json scenarios = Json::array();
    for (const auto& def : cfg.scenarios) scenarios.push_back(scenario_to_json(def));
    j["scenarios"] = scenarios;
    j["run"] = Json{{"synth_duration_s", cfg.run.synth_duration_s},
                    {"sample_rate_hz", cfg.run.sample_rate_hz}};
    return j;
}

SpectrumSpec load_spectrum_spec(const std::string& path) {
    const Json j = parse_json(slurp(path), path);
    SpectrumSpec spec;
    const double fundamental = number_or(j, "fundamental_hz", 60.0);
    spec.duration_s = number_or(j, "duration_s", 1.0);
    spec.sample_rate_hz = number_or(j, "sample_rate_hz", 20000.0);
    spec.spectrum = HarmonicSpectrum(fundamental);
    if (!j.contains("harmonics") || !j["harmonics"].is_array())
        throw Error(errc::config, path + ": missing array field 'harmonics'");
    for (const auto& hj : j["harmonics"]) {
        const int order = int_or(hj, "order", 0);
        if (order < 1)
            throw Error(errc::config, path + ": harmonic order must be a positive integer");
        spec.spectrum.set(order, require_number(hj, "amps_rms", path),
                          number_or(hj, "phase_rad", 0.0));
    }
    return spec;
}

Json spectrum_spec_to_json(const SpectrumSpec& s) {
    Json j;
    j["fundamental_hz"] = s.spectrum.fundamental_hz();
    j["duration_s"] = s.duration_s;
    j["sample_rate_hz"] = s.sample_rate_hz;
    Json harmonics = Json::array();
    for (const auto& c : s.spectrum.components())
        harmonics.push_back(Json{
            {"order", c.order}, {"amps_rms", c.amps_rms}, {"phase_rad", c.phase_rad}});
    j["harmonics"] = harmonics;
    return j;
}

loadsim::RectifierParams load_rectifier_params(const std::string& path) {
    const Json j = parse_json(slurp(path), path);
    loadsim::RectifierParams p;
    p.source_rms_voltage_v = number_or(j, "source_rms_voltage_v", p.source_rms_voltage_v);
    p.source_frequency_hz = number_or(j, "source_frequency_hz", p.source_frequency_hz);
    p.source_resistance_ohm = number_or(j, "source_resistance_ohm", p.source_resistance_ohm);
    p.source_inductance_h = number_or(j, "source_inductance_h", p.source_inductance_h);
    p.dc_capacitance_f = number_or(j, "dc_capacitance_f", p.dc_capacitance_f);
    p.dc_load_resistance_ohm = number_or(j, "dc_load_resistance_ohm", p.dc_load_resistance_ohm);
    p.timestep_s = number_or(j, "timestep_s", p.timestep_s);
    p.duration_s = number_or(j, "duration_s", p.duration_s);
    p.discard_periods = int_or(j, "discard_periods", p.discard_periods);
    p.validate();
    return p;
}

Json rectifier_params_to_json(const loadsim::RectifierParams& p) {
    return Json{{"source_rms_voltage_v", p.source_rms_voltage_v},
                {"source_frequency_hz", p.source_frequency_hz},
                {"source_resistance_ohm", p.source_resistance_ohm},
                {"source_inductance_h", p.source_inductance_h},
                {"dc_capacitance_f", p.dc_capacitance_f},
                {"dc_load_resistance_ohm", p.dc_load_resistance_ohm},
                {"timestep_s", p.timestep_s},
                {"duration_s", p.duration_s},
                {"discard_periods", p.discard_periods}};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(errc::io, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json(const std::string& text, const std::string& context) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw Error(errc::config, context + ": not valid JSON");
    return j;
}

} // namespace gridharm::config
