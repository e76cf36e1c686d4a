#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "gridharm/config.hpp"
#include "gridharm/scenario.hpp"

namespace gridharm::report {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// FNV-1a 64-bit content hash. Not cryptographic; it exists so a report can
/// be tied to the exact input bytes that produced it.
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

/// Accumulates input bytes (file contents, resolved configuration, flags)
/// into one digest.
class DigestBuilder {
public:
    DigestBuilder& feed(std::string_view bytes);
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

/// Report skeleton: schema/version/digest header plus payload blocks.
/// Timestamps are omitted unless explicitly requested so identical inputs
/// produce byte-identical documents.
config::Json report_header(const std::string& input_digest,
                           const std::optional<std::string>& generated_at);

/// Harmonic table + metrics block for a single analyzed waveform.
config::Json analysis_report(const std::string& input_digest,
                             const std::optional<std::string>& generated_at,
                             const HarmonicSpectrum& spectrum,
                             const xfmr::DeratingReport& metrics);

/// Scenario batch: one entry per result with metrics, reference values when
/// present, and the plot-data blocks (per-scenario spectrum bars plus the
/// THD/eddy bar pairs).
config::Json scenarios_report(const std::string& input_digest,
                              const std::optional<std::string>& generated_at,
                              std::span<const scenario::ScenarioResult> results);

} // namespace gridharm::report
