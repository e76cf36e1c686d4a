#pragma once

#include <stdexcept>
#include <string>

namespace gridharm {

// Machine-parsable error categories. The CLI prefixes every error message
// with the corresponding code so scripts can branch on failures.
enum class errc {
    invalid_argument,   // E_ARG
    aliasing,           // E_ALIAS      harmonic at or above Nyquist in synthesis
    nyquist,            // E_NYQUIST    analysis band exceeds Nyquist
    short_capture,      // E_SHORT      waveform shorter than one fundamental period
    csv_format,         // E_CSV        malformed waveform CSV
    nonuniform,         // E_NONUNIFORM timestamps not uniform within tolerance
    config,             // E_CONFIG     bad configuration document
    io,                 // E_IO         filesystem failure
    convergence,        // E_CONV       solver mode iteration did not settle
    divergence,         // E_DIVERGE    solver state blew up
    undefined_thd,      // E_THD        missing or zero fundamental
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const { return code_; }
    const char* code_name() const { return errc_name(code_); }

private:
    errc code_;
};

} // namespace gridharm
