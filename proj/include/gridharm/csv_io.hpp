#pragma once

#include <string>

#include "gridharm/signal.hpp"

namespace gridharm::csv {

/// Reads the `time_s,current_a` waveform format. The sample rate is
/// inferred from the timestamps, which must be strictly increasing and
/// uniform within 1 part in 1e6. The fundamental is supplied by the caller
/// (it is not part of the file format).
Waveform read_waveform(const std::string& path, double fundamental_hz);

/// Writes the same format with full-precision values.
void write_waveform(const std::string& path, const Waveform& w);

} // namespace gridharm::csv
