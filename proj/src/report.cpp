#include "gridharm/report.hpp"

#include <cstdio>

namespace gridharm::report {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {
std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}
} // namespace

std::string digest_hex(std::string_view bytes) { return to_hex(fnv1a64(bytes)); }

DigestBuilder& DigestBuilder::feed(std::string_view bytes) {
    for (unsigned char c : bytes) {
        state_ ^= c;
        state_ *= 0x100000001b3ull;
    }
    // length separator keeps "ab"+"c" distinct from "a"+"bc"
    state_ ^= bytes.size();
    state_ *= 0x100000001b3ull;
    return *this;
}

std::string DigestBuilder::hex() const { return to_hex(state_); }

config::Json report_header(const std::string& input_digest,
                           const std::optional<std::string>& generated_at) {
    config::Json j;
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["input_digest"] = input_digest;
    if (generated_at) j["generated_at"] = *generated_at;
    return j;
}

namespace {

config::Json spectrum_block(const HarmonicSpectrum& s) {
    config::Json harmonics = config::Json::array();
    const double fund = s.magnitude(1);
    for (const auto& c : s.components()) {
        config::Json h;
        h["order"] = c.order;
        h["frequency_hz"] = c.order * s.fundamental_hz();
        h["amps_rms"] = c.amps_rms;
        h["phase_rad"] = c.phase_rad;
        if (fund > 0.0) h["fraction_of_fundamental"] = c.amps_rms / fund;
        harmonics.push_back(h);
    }
    return harmonics;
}

config::Json metrics_block(const xfmr::DeratingReport& m) {
    return config::Json{{"thd", m.thd},
                        {"thd_pct", 100.0 * m.thd},
                        {"eddy_watts", m.eddy_watts},
                        {"eddy_per_unit", m.eddy_per_unit},
                        {"f_hl", m.f_hl},
                        {"total_loss_w", m.total_loss_w},
                        {"theta_final_k", m.theta_final_k},
                        {"derating", m.derating},
                        {"derating_pct", 100.0 * m.derating}};
}

} // namespace

config::Json analysis_report(const std::string& input_digest,
                             const std::optional<std::string>& generated_at,
                             const HarmonicSpectrum& spectrum,
                             const xfmr::DeratingReport& metrics) {
    config::Json j = report_header(input_digest, generated_at);
    j["fundamental_hz"] = spectrum.fundamental_hz();
    j["harmonics"] = spectrum_block(spectrum);
    j["metrics"] = metrics_block(metrics);
    return j;
}

config::Json scenarios_report(const std::string& input_digest,
                              const std::optional<std::string>& generated_at,
                              std::span<const scenario::ScenarioResult> results) {
    config::Json j = report_header(input_digest, generated_at);
    config::Json entries = config::Json::array();
    config::Json thd_eddy_bars = config::Json::array();
    for (const auto& r : results) {
        config::Json e;
        e["id"] = r.id;
        e["net_load_kw"] = r.net_load_kw;
        e["metrics"] = metrics_block(r.report);
        if (r.reference) {
            e["reference"] = config::Json{{"thd_pct", r.reference->thd_pct},
                                          {"eddy_pct", r.reference->eddy_pct},
                                          {"derating_pct", r.reference->derating_pct}};
        }
        e["spectrum"] = spectrum_block(r.spectrum);
        entries.push_back(e);
        thd_eddy_bars.push_back(config::Json{{"id", r.id},
                                             {"thd_pct", 100.0 * r.report.thd},
                                             {"eddy_pct", 100.0 * r.report.eddy_per_unit}});
    }
    j["scenarios"] = entries;
    j["plots"] = config::Json{{"thd_eddy_bars", thd_eddy_bars}};
    return j;
}

} // namespace gridharm::report
