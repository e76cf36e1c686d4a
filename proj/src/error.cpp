#include "gridharm/error.hpp"

namespace gridharm {

const char* errc_name(errc c) {
    switch (c) {
    case errc::invalid_argument: return "E_ARG";
    case errc::aliasing:         return "E_ALIAS";
    case errc::nyquist:          return "E_NYQUIST";
    case errc::short_capture:    return "E_SHORT";
    case errc::csv_format:       return "E_CSV";
    case errc::nonuniform:       return "E_NONUNIFORM";
    case errc::config:           return "E_CONFIG";
    case errc::io:               return "E_IO";
    case errc::convergence:      return "E_CONV";
    case errc::divergence:       return "E_DIVERGE";
    case errc::undefined_thd:    return "E_THD";
    }
    return "E_UNKNOWN";
}

} // namespace gridharm
