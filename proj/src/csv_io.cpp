#include "gridharm/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>

namespace gridharm::csv {

namespace {

double parse_field(std::string_view field, long line_no, const char* column) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw Error(errc::csv_format, "line " + std::to_string(line_no) + ": cannot parse " +
                                          column + " value '" + std::string(field) + "'");
    return value;
}

} // namespace

Waveform read_waveform(const std::string& path, double fundamental_hz) {
    std::ifstream in(path);
    if (!in)
        throw Error(errc::io, "cannot open '" + path + "' for reading");

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line))
        throw Error(errc::csv_format, "empty file: expected header 'time_s,current_a'");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "time_s,current_a") {
        if (line.find(',') == std::string::npos)
            throw Error(errc::csv_format,
                        "line 1: missing column 'current_a' (header must be 'time_s,current_a')");
        throw Error(errc::csv_format,
                    "line 1: expected header 'time_s,current_a', got '" + line + "'");
    }

    std::vector<double> times;
    std::vector<double> samples;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(errc::csv_format,
                        "line " + std::to_string(line_no) + ": missing column 'current_a'");
        const std::string_view time_field(line.data(), comma);
        const std::string_view amp_field(line.data() + comma + 1, line.size() - comma - 1);
        times.push_back(parse_field(time_field, line_no, "time_s"));
        samples.push_back(parse_field(amp_field, line_no, "current_a"));
    }
    if (samples.size() < 2)
        throw Error(errc::csv_format, "need at least 2 samples, got " +
                                          std::to_string(samples.size()));

    const double dt = times[1] - times[0];
    if (!(dt > 0.0))
        throw Error(errc::nonuniform, "line 3: timestamps must be strictly increasing");
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        if (!(step > 0.0))
            throw Error(errc::nonuniform, "line " + std::to_string(i + 2) +
                                              ": timestamps must be strictly increasing");
        if (std::abs(step - dt) > 1e-6 * dt)
            throw Error(errc::nonuniform,
                        "line " + std::to_string(i + 2) + ": timestep " + std::to_string(step) +
                            " deviates from " + std::to_string(dt) +
                            " by more than 1 part in 1e6");
    }
    return Waveform(std::move(samples), 1.0 / dt, fundamental_hz);
}

void write_waveform(const std::string& path, const Waveform& w) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out)
        throw Error(errc::io, "cannot open '" + path + "' for writing");
    std::fputs("time_s,current_a\n", out);
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const double t = static_cast<double>(i) / w.sample_rate_hz;
        std::fprintf(out, "%.17g,%.17g\n", t, w.samples[i]);
    }
    if (std::fclose(out) != 0)
        throw Error(errc::io, "failed to flush '" + path + "'");
}

} // namespace gridharm::csv
