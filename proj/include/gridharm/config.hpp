#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gridharm/loadsim.hpp"
#include "gridharm/scenario.hpp"
#include "gridharm/spectral.hpp"
#include "gridharm/xfmr.hpp"

namespace gridharm::config {

using Json = nlohmann::ordered_json;

/// Everything the pipeline needs, with stock defaults. A configuration file
/// overlays the defaults section by section; command-line flags overlay the
/// file.
struct ToolConfig {
    double fundamental_hz = 60.0;
    double nominal_voltage_v = 240.0;
    spectral::SpectralConfig spectral;
    xfmr::TransformerSpec transformer;
    std::vector<loadsim::LoadSignature> signatures;
    std::vector<scenario::ScenarioDef> scenarios;
    scenario::RunConfig run;

    const loadsim::LoadSignature& signature(const std::string& name) const;
};

ToolConfig default_config();

/// Parses a configuration document and overlays it on the defaults.
/// Validation failures carry the offending path in the message.
ToolConfig load_config(const std::string& path);
ToolConfig config_from_json(const Json& j);

Json config_to_json(const ToolConfig& cfg);

/// Spectrum document consumed by the synth command.
struct SpectrumSpec {
    HarmonicSpectrum spectrum{60.0};
    double duration_s = 1.0;
    double sample_rate_hz = 20000.0;
};

SpectrumSpec load_spectrum_spec(const std::string& path);
Json spectrum_spec_to_json(const SpectrumSpec& s);

loadsim::RectifierParams load_rectifier_params(const std::string& path);
Json rectifier_params_to_json(const loadsim::RectifierParams& p);

/// Reads a whole file; E_IO on failure.
std::string slurp(const std::string& path);

/// Parses text as JSON; E_CONFIG with context on failure.
Json parse_json(const std::string& text, const std::string& context);

} // namespace gridharm::config
