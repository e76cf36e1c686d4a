// gridharm: harmonic loading analysis for residential service transformers.
//
// Subcommands: analyze, scenarios, synth, rectifier, export-defaults.
// Errors go to stderr with a machine-parsable E_* prefix; exit status is 0
// only when no error path was taken.

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gridharm/config.hpp"
#include "gridharm/csv_io.hpp"
#include "gridharm/report.hpp"

namespace fs = std::filesystem;
using gridharm::Error;
using gridharm::errc;
using Json = gridharm::config::Json;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out_path;
    std::optional<int> h_max;
    std::optional<double> pec_r;
    bool seed_docs = false;
    bool timestamps = false;
};

std::optional<std::string> timestamp_if(bool enabled) {
    if (!enabled) return std::nullopt;
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string(buf);
}

gridharm::config::ToolConfig resolve_config(const GlobalOptions& g,
                                            gridharm::report::DigestBuilder& digest) {
    gridharm::config::ToolConfig cfg;
    if (!g.config_path.empty()) {
        const std::string text = gridharm::config::slurp(g.config_path);
        digest.feed(text);
        cfg = gridharm::config::config_from_json(
            gridharm::config::parse_json(text, g.config_path));
    } else {
        cfg = gridharm::config::default_config();
    }
    // flags win over the file, the file wins over built-ins
    if (g.h_max) {
        if (*g.h_max < 1) throw Error(errc::invalid_argument, "--h-max must be at least 1");
        cfg.spectral.h_max = *g.h_max;
    }
    if (g.pec_r) {
        cfg.transformer.p_ec_r = *g.pec_r;
        cfg.transformer.validate();
    }
    digest.feed("h_max=" + std::to_string(cfg.spectral.h_max) +
                ";p_ec_r=" + std::to_string(cfg.transformer.p_ec_r));
    if (!cfg.transformer.thermal.tau_consistent())
        std::fprintf(stderr,
                     "warning: thermal time constant disagrees with mass*c/(alpha*A) by more "
                     "than 1%%\n");
    return cfg;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw Error(errc::io, "failed to write '" + path.string() + "'");
}

void write_json_file(const fs::path& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void seed_default_docs(const std::string& out_dir) {
    const fs::path dir = out_dir.empty() ? fs::path("gridharm-docs") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(errc::io, "cannot create '" + dir.string() + "': " + ec.message());

    write_json_file(dir / "config.json",
                    gridharm::config::config_to_json(gridharm::config::default_config()));
    write_json_file(dir / "rectifier.json",
                    gridharm::config::rectifier_params_to_json(gridharm::loadsim::RectifierParams{}));
    gridharm::config::SpectrumSpec spec;
    spec.spectrum.set(1, 1.0);
    spec.spectrum.set(3, 0.3);
    spec.spectrum.set(5, 0.4);
    write_json_file(dir / "spectrum.json", gridharm::config::spectrum_spec_to_json(spec));
    std::printf("wrote default documents to %s\n", dir.string().c_str());
}

void print_analysis(const gridharm::HarmonicSpectrum& spectrum,
                    const gridharm::xfmr::DeratingReport& m) {
    std::printf("%4s %12s %14s %10s\n", "h", "freq_hz", "amps_rms", "pct_of_h1");
    const double fund = spectrum.magnitude(1);
    for (const auto& c : spectrum.components()) {
        std::printf("%4d %12.6g %14.6g %10.6g\n", c.order, c.order * spectrum.fundamental_hz(),
                    c.amps_rms, fund > 0.0 ? 100.0 * c.amps_rms / fund : 0.0);
    }
    std::printf("\n");
    std::printf("thd            %.6g %%\n", 100.0 * m.thd);
    std::printf("f_hl           %.6g\n", m.f_hl);
    std::printf("eddy loss      %.6g W (%.6g per unit)\n", m.eddy_watts, m.eddy_per_unit);
    std::printf("total loss     %.6g W\n", m.total_loss_w);
    std::printf("theta_final    %.6g K\n", m.theta_final_k);
    std::printf("derating       %.6g %%\n", 100.0 * m.derating);
}

int cmd_analyze(const GlobalOptions& g, const std::string& csv_path, double fundamental_flag) {
    gridharm::report::DigestBuilder digest;
    auto cfg = resolve_config(g, digest);
    const double fundamental = fundamental_flag > 0.0 ? fundamental_flag : cfg.fundamental_hz;

    const std::string csv_bytes = gridharm::config::slurp(csv_path);
    digest.feed(csv_bytes);

    const auto wave = gridharm::csv::read_waveform(csv_path, fundamental);
    const auto spectrum = gridharm::spectral::analyze(wave, cfg.spectral);
    const auto metrics = gridharm::xfmr::derating_report(spectrum, cfg.transformer);

    print_analysis(spectrum, metrics);
    if (!g.out_path.empty()) {
        write_json_file(g.out_path,
                        gridharm::report::analysis_report(digest.hex(),
                                                          timestamp_if(g.timestamps), spectrum,
                                                          metrics));
        std::printf("\nreport written to %s\n", g.out_path.c_str());
    }
    return 0;
}

int cmd_scenarios(const GlobalOptions& g) {
    gridharm::report::DigestBuilder digest;
    auto cfg = resolve_config(g, digest);

    // fail before any computation when the output directory is unusable
    fs::path out_dir;
    if (!g.out_path.empty()) {
        out_dir = g.out_path;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec || !fs::is_directory(out_dir))
            throw Error(errc::io, "output directory '" + out_dir.string() + "' is not writable");
        const fs::path probe = out_dir / ".gridharm-probe";
        std::ofstream test(probe);
        if (!test) throw Error(errc::io,
                               "output directory '" + out_dir.string() + "' is not writable");
        test.close();
        fs::remove(probe, ec);
    }

    if (cfg.scenarios.empty()) {
        std::fprintf(stderr, "warning: no scenarios configured; nothing to run\n");
        std::printf("%s", gridharm::scenario::comparison_table({}).c_str());
        return 0;
    }

    const auto results =
        gridharm::scenario::run_all(cfg.scenarios, cfg.transformer, cfg.spectral, cfg.run);
    std::printf("%s", gridharm::scenario::comparison_table(results).c_str());

    if (!out_dir.empty()) {
        write_json_file(out_dir / "report.json",
                        gridharm::report::scenarios_report(digest.hex(),
                                                           timestamp_if(g.timestamps), results));
        // plot data: one spectrum file per scenario plus the THD/eddy summary
        for (const auto& r : results) {
            std::string csv = "order,frequency_hz,amps_rms,fraction_of_fundamental\n";
            const double fund = r.spectrum.magnitude(1);
            char line[128];
            for (const auto& c : r.spectrum.components()) {
                std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", c.order,
                              c.order * r.spectrum.fundamental_hz(), c.amps_rms,
                              fund > 0.0 ? c.amps_rms / fund : 0.0);
                csv += line;
            }
            write_text_file(out_dir / ("spectrum_" + r.id + ".csv"), csv);
        }
        std::string summary = "scenario,net_load_kw,thd_pct,eddy_pct,derating_pct\n";
        for (const auto& r : results) {
            char line[160];
            std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g,%.17g\n", r.id.c_str(),
                          r.net_load_kw, 100.0 * r.report.thd, 100.0 * r.report.eddy_per_unit,
                          100.0 * r.report.derating);
            summary += line;
        }
        write_text_file(out_dir / "summary.csv", summary);
        std::printf("\nreport and plot data written to %s\n", out_dir.string().c_str());
    }
    return 0;
}

int cmd_synth(const GlobalOptions&, const std::string& spec_path, const std::string& out_csv) {
    const auto spec = gridharm::config::load_spectrum_spec(spec_path);
    const auto wave = gridharm::synthesize(spec.spectrum, spec.duration_s, spec.sample_rate_hz);
    gridharm::csv::write_waveform(out_csv, wave);
    std::printf("wrote %zu samples to %s\n", wave.size(), out_csv.c_str());
    return 0;
}

int cmd_rectifier(const GlobalOptions& g, const std::string& params_path,
                  const std::string& out_csv) {
    gridharm::report::DigestBuilder digest;
    const std::string params_bytes = gridharm::config::slurp(params_path);
    digest.feed(params_bytes);
    const auto params = gridharm::config::load_rectifier_params(params_path);

    gridharm::loadsim::RectifierDiagnostics diag;
    try {
        const auto wave = gridharm::loadsim::simulate_rectifier(params, &diag);
        gridharm::csv::write_waveform(out_csv, wave);
    } catch (const Error& e) {
        if (e.code() == errc::convergence || e.code() == errc::divergence) {
            Json j = gridharm::report::report_header(digest.hex(), timestamp_if(g.timestamps));
            j["error"] = std::string(e.code_name()) + ": " + e.what();
            j["diagnostics"] = Json{{"max_mode_iterations", diag.max_mode_iterations},
                                    {"mode_switches", diag.mode_switches},
                                    {"steps", diag.steps}};
            write_json_file(out_csv + ".diag.json", j);
        }
        throw;
    }

    Json j = gridharm::report::report_header(digest.hex(), timestamp_if(g.timestamps));
    j["diagnostics"] = Json{{"max_mode_iterations", diag.max_mode_iterations},
                            {"mode_switches", diag.mode_switches},
                            {"discarded_periods", diag.discarded_periods},
                            {"steps", diag.steps}};
    write_json_file(out_csv + ".diag.json", j);
    std::printf("wrote waveform to %s (diagnostics in %s.diag.json)\n", out_csv.c_str(),
                out_csv.c_str());
    return 0;
}

int cmd_export_defaults(const GlobalOptions& g) {
    const Json j = gridharm::config::config_to_json(gridharm::config::default_config());
    if (g.out_path.empty()) {
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        write_json_file(g.out_path, j);
        std::printf("defaults written to %s\n", g.out_path.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "gridharm: harmonic spectra, eddy losses, and derating for residential service "
        "transformers"};
    app.require_subcommand(0, 1);

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON configuration file (overlays built-ins)");
    app.add_option("--out", g.out_path,
                   "output path: report file for analyze/export-defaults, directory for "
                   "scenarios");
    int h_max_flag = 0;
    double pec_r_flag = -1.0;
    auto* h_max_opt =
        app.add_option("--h-max", h_max_flag, "highest harmonic order to extract (default 15)");
    auto* pec_r_opt = app.add_option(
        "--pec-r", pec_r_flag, "winding eddy loss factor P_EC-R, per unit (default 0.05)");
    app.add_flag("--seed-docs", g.seed_docs,
                 "write default input documents (config, rectifier params, spectrum) to --out "
                 "or ./gridharm-docs");
    app.add_flag("--timestamps", g.timestamps,
                 "embed a generation timestamp in reports (off by default so identical inputs "
                 "give byte-identical outputs)");

    std::string csv_path, spec_path, params_path, out_csv;
    double fundamental_flag = 0.0;

    auto* analyze = app.add_subcommand("analyze", "harmonic table and derating for a waveform CSV");
    analyze->add_option("csv", csv_path, "waveform CSV (time_s,current_a)")->required();
    analyze->add_option("--fundamental", fundamental_flag, "fundamental frequency, Hz (default 60)");

    auto* scenarios = app.add_subcommand("scenarios", "run the PV-penetration scenario suite");

    auto* synth = app.add_subcommand("synth", "synthesize a waveform CSV from a spectrum document");
    synth->add_option("spec", spec_path, "spectrum JSON")->required();
    synth->add_option("out_csv", out_csv, "output waveform CSV")->required();

    auto* rectifier =
        app.add_subcommand("rectifier", "simulate a diode rectifier with DC-link capacitor");
    rectifier->add_option("params", params_path, "rectifier parameter JSON")->required();
    rectifier->add_option("out_csv", out_csv, "output waveform CSV")->required();

    auto* export_defaults =
        app.add_subcommand("export-defaults", "print or write the built-in configuration");

    CLI11_PARSE(app, argc, argv);
    if (h_max_opt->count() > 0) g.h_max = h_max_flag;
    if (pec_r_opt->count() > 0) g.pec_r = pec_r_flag;

    try {
        if (g.seed_docs) {
            seed_default_docs(g.out_path);
            if (app.get_subcommands().empty()) return 0;
        }
        if (analyze->parsed()) return cmd_analyze(g, csv_path, fundamental_flag);
        if (scenarios->parsed()) return cmd_scenarios(g);
        if (synth->parsed()) return cmd_synth(g, spec_path, out_csv);
        if (rectifier->parsed()) return cmd_rectifier(g, params_path, out_csv);
        if (export_defaults->parsed()) return cmd_export_defaults(g);
        std::fprintf(stderr, "%s", app.help().c_str());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s: %s\n", e.code_name(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "E_UNKNOWN: %s\n", e.what());
        return 1;
    }
}
