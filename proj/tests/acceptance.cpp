// Acceptance suite: every release gate runs here, one pass/fail line each.
// Exit status is the number of failed criteria (0 = all green).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "gridharm/config.hpp"
#include "gridharm/csv_io.hpp"
#include "gridharm/loadsim.hpp"
#include "gridharm/scenario.hpp"
#include "gridharm/spectral.hpp"
#include "gridharm/xfmr.hpp"

using namespace gridharm;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const char* label, bool ok, const std::string& detail = "") {
    std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, label,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- 1. fft vs direct transform, plus Parseval -------------------------

void criterion_fft_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    bool ok = true;
    std::string detail;

    for (std::size_t n = 2; n <= 1024 && ok; n <<= 1) {
        for (int trial = 0; trial < 200 && ok; ++trial) {
            std::vector<double> x(n);
            for (double& v : x) v = dist(rng);
            const auto ref = spectral::dft_direct(x);
            const auto fast = spectral::fft(x);
            double scale = 1.0;
            for (const auto& z : ref) scale = std::max(scale, std::abs(z));
            for (std::size_t k = 0; k < n; ++k) {
                if (std::abs(fast[k] - ref[k]) > 1e-9 * scale) {
                    ok = false;
                    detail = "bin mismatch at n=" + std::to_string(n);
                    break;
                }
            }
            double time_sum = 0.0, freq_sum = 0.0;
            for (double v : x) time_sum += v * v;
            for (const auto& z : fast) freq_sum += std::norm(z);
            if (std::abs(time_sum - freq_sum / static_cast<double>(n)) >
                1e-9 * std::max(1.0, time_sum)) {
                ok = false;
                detail = "Parseval violated at n=" + std::to_string(n);
            }
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 10.0) {
        ok = false;
        detail = "runtime " + std::to_string(elapsed) + " s";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f s", elapsed);
    report(1, "fft matches dft_direct (200 signals per pow2 length <= 1024, 1e-9)", ok,
           detail.empty() ? buf : detail);
}

// ---- 2. synthesize -> analyze round trip --------------------------------

void criterion_round_trip() {
    std::mt19937 rng(202);
    std::uniform_real_distribution<double> mag(0.01, 10.0);
    std::uniform_real_distribution<double> ph(-3.1, 3.1);
    std::uniform_int_distribution<int> keep(0, 1);
    bool ok = true;
    std::string detail;

    for (int trial = 0; trial < 100 && ok; ++trial) {
        HarmonicSpectrum s(60.0);
        s.set(1, mag(rng), ph(rng));
        for (int h = 2; h <= 15; ++h)
            if (keep(rng)) s.set(h, mag(rng), ph(rng));
        // 0.1 s at 20 kHz is exactly 6 fundamental periods
        const Waveform w = synthesize(s, 0.1, 20000.0);
        const HarmonicSpectrum back = spectral::analyze(w, spectral::SpectralConfig{});
        for (const auto& c : s.components()) {
            const double err = std::abs(back.magnitude(c.order) - c.amps_rms) / c.amps_rms;
            if (err > 1e-6) {
                ok = false;
                detail = "order " + std::to_string(c.order) + " off by " + std::to_string(err);
                break;
            }
        }
    }
    report(2, "100 random spectra recovered within 1e-6 (integer-period 20 kHz capture)", ok,
           detail);
}

// ---- 3. formula identities ----------------------------------------------

void criterion_formula_identities() {
    bool ok = true;
    std::string detail;
    {
        xfmr::TransformerSpec t;
        t.p_ec_r = 0.05;

        HarmonicSpectrum pure(60.0);
        pure.set(1, 7.5);
        if (xfmr::thd(pure) != 0.0) { ok = false; detail = "thd(pure) != 0"; }
        if (xfmr::f_hl(pure) != 1.0) { ok = false; detail = "f_hl(pure) != 1"; }
        if (xfmr::eddy_loss(pure, t).per_unit != t.p_ec_r) {
            ok = false;
            detail = "per-unit eddy of a pure fundamental != p_ec_r";
        }

        for (int h = 1; h <= 15 && ok; ++h) {
            HarmonicSpectrum s(60.0);
            s.set(h, 3.3);
            if (std::abs(xfmr::f_hl(s) - static_cast<double>(h) * h) > 1e-12) {
                ok = false;
                detail = "f_hl != h^2 at h=" + std::to_string(h);
            }
        }

        HarmonicSpectrum fixture(60.0);
        fixture.set(1, 1.0);
        fixture.set(3, 0.3);
        fixture.set(5, 0.4);
        if (std::abs(xfmr::thd(fixture) - 0.5) > 1e-9) { ok = false; detail = "thd fixture"; }
        if (std::abs(xfmr::f_hl(fixture) - 4.648) > 1e-9) { ok = false; detail = "f_hl fixture"; }
    }
    report(3, "thd/f_hl/eddy identities (pure tones and the 1/0.3/0.4 fixture)", ok, detail);
}

// ---- 4. derating properties ----------------------------------------------

void criterion_derating() {
    bool ok = true;
    std::string detail;
    xfmr::TransformerSpec t;
    t.p_ec_r = 0.05;

    if (xfmr::derating(1.0, t) != 1.0) { ok = false; detail = "derating(1) != 1"; }
    if (std::abs(xfmr::derating(5.0, t) - 0.916515) > 1e-6) {
        ok = false;
        detail = "derating(5, 0.05)";
    }
    double prev = xfmr::derating(1.0, t);
    for (int i = 1; i <= 1000 && ok; ++i) {
        const double fhl = 1.0 + 0.05 * i;
        const double cur = xfmr::derating(fhl, t);
        if (!(cur < prev)) {
            ok = false;
            detail = "not strictly decreasing at f_hl=" + std::to_string(fhl);
        }
        prev = cur;
    }
    report(4, "derating: exact at 1, 0.916515 at f_hl=5, strictly decreasing on 1000 points",
           ok, detail);
}

// ---- 5. scenario trend reproduction ---------------------------------------

void criterion_scenario_trends() {
    bool ok = true;
    std::string detail;
    const auto defs = scenario::builtin_scenarios();
    const auto r = scenario::run_all(defs, xfmr::TransformerSpec{}, spectral::SpectralConfig{});

    auto thd = [&](int i) { return r[static_cast<std::size_t>(i - 1)].report.thd; };
    auto der = [&](int i) { return r[static_cast<std::size_t>(i - 1)].report.derating; };
    auto h3 = [&](int i) { return r[static_cast<std::size_t>(i - 1)].spectrum.magnitude(3); };

    if (!(thd(3) > thd(2) && thd(2) > thd(1) && thd(1) > thd(4) && thd(4) > thd(5))) {
        ok = false;
        detail = "THD ordering broken";
    }
    if (!(der(5) > der(4) && der(4) > der(1) && der(1) > der(2) && der(2) > der(3))) {
        ok = false;
        detail = "derating ordering broken";
    }
    if (std::abs(h3(1) - h3(2)) > 1e-9 || std::abs(h3(1) - h3(3)) > 1e-9) {
        ok = false;
        detail = "h3 drifts across scenarios 1-3";
    }
    if (!(thd(4) < 0.06 && thd(5) < 0.06)) {
        ok = false;
        detail = "scenario 4/5 THD not below 6%";
    }
    report(5, "stock scenarios: THD 3>2>1>4>5, derating 5>4>1>2>3, h3 constant, day THD < 6%",
           ok, detail);
}

// ---- 6. PV compensates the fundamental only -------------------------------

void criterion_pv_compensation() {
    bool ok = true;
    std::string detail;
    xfmr::TransformerSpec t;

    HarmonicSpectrum load(60.0);
    load.set(1, 40.0);
    load.set(3, 7.0);
    load.set(5, 3.0);
    load.set(7, 1.2);

    double prev_thd = -1.0;
    double prev_der = 2.0;
    for (int step = 0; step <= 90 && ok; step += 5) {
        const double pv_amps = 40.0 * step / 100.0;
        HarmonicSpectrum net(60.0);
        for (const auto& c : load.components()) net.set(c.order, c.amps_rms, c.phase_rad);
        net.add_phasor(1, std::polar(pv_amps, std::numbers::pi));
        const double cur_thd = xfmr::thd(net);
        const double cur_der = xfmr::derating(xfmr::f_hl(net), t);
        if (!(cur_thd > prev_thd)) {
            ok = false;
            detail = "THD not strictly increasing at " + std::to_string(step) + "%";
        }
        if (!(cur_der < prev_der)) {
            ok = false;
            detail = "derating not strictly decreasing at " + std::to_string(step) + "%";
        }
        prev_thd = cur_thd;
        prev_der = cur_der;
    }
    report(6, "fundamental-only PV sweep 0..90%: THD strictly up, derating strictly down", ok,
           detail);
}

// ---- 7. rectifier simulator ------------------------------------------------

void criterion_rectifier() {
    bool ok = true;
    std::string detail;
    const auto start = std::chrono::steady_clock::now();

    loadsim::RectifierParams resistive;
    resistive.dc_capacitance_f = 0.5e-6;
    resistive.dc_load_resistance_ohm = 10.0;
    resistive.source_resistance_ohm = 0.1;
    resistive.source_inductance_h = 50e-6;
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto s =
            spectral::analyze(loadsim::simulate_rectifier(resistive), spectral::SpectralConfig{});
        if (seconds_since(t0) >= 5.0) { ok = false; detail = "resistive run too slow"; }
        if (!(xfmr::thd(s) < 0.01)) { ok = false; detail = "resistive THD >= 1%"; }
    }

    loadsim::RectifierParams cap; // stock 470 uF / 60 ohm fixture
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto s =
            spectral::analyze(loadsim::simulate_rectifier(cap), spectral::SpectralConfig{});
        if (seconds_since(t0) >= 5.0) { ok = false; detail = "capacitor run too slow"; }

        loadsim::RectifierParams halved = cap;
        halved.timestep_s = cap.timestep_s / 2.0;
        const auto t1 = std::chrono::steady_clock::now();
        const auto s2 =
            spectral::analyze(loadsim::simulate_rectifier(halved), spectral::SpectralConfig{});
        if (seconds_since(t1) >= 5.0) { ok = false; detail = "halved-step run too slow"; }

        const double rel = std::abs(xfmr::thd(s2) - xfmr::thd(s)) / xfmr::thd(s);
        if (!(rel < 0.01)) {
            ok = false;
            detail = "THD moved " + std::to_string(100.0 * rel) + "% under halving";
        }
        for (int h = 2; h <= 14; h += 2) {
            if (!(s.magnitude(h) < 0.01 * s.magnitude(1))) {
                ok = false;
                detail = "even harmonic h=" + std::to_string(h) + " above 1% of fundamental";
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f s total", seconds_since(start));
    report(7, "rectifier: resistive THD < 1%, halving-stable THD, even harmonics < 1%", ok,
           detail.empty() ? buf : detail);
}

// ---- 8. thermal model -------------------------------------------------------

void criterion_thermal() {
    bool ok = true;
    std::string detail;
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> pw(1.0, 5000.0);
    std::uniform_real_distribution<double> coeff(0.5, 500.0);
    std::uniform_real_distribution<double> tau(10.0, 50000.0);

    for (int trial = 0; trial < 100 && ok; ++trial) {
        xfmr::ThermalSpec th{100.0, 400.0, coeff(rng), tau(rng)};
        const double p = pw(rng);
        const double inf = std::numeric_limits<double>::infinity();
        if (xfmr::theta_rise(p, th, inf) != p / th.emissivity_area_w_per_k) {
            ok = false;
            detail = "theta(inf) != P/(alpha A)";
        }
        const double ratio =
            xfmr::theta_rise(p, th, th.time_constant_s) / xfmr::theta_rise(p, th, inf);
        if (std::abs(ratio - (1.0 - std::exp(-1.0))) > 1e-12) {
            ok = false;
            detail = "theta(tau)/theta(inf) != 1 - 1/e";
        }
        double prev = -1.0;
        for (double t = 0.0; t <= 4.0 * th.time_constant_s; t += th.time_constant_s / 3.0) {
            const double cur = xfmr::theta_rise(p, th, t);
            if (cur < prev) { ok = false; detail = "not monotone in t"; }
            prev = cur;
        }
        if (xfmr::theta_rise(2.0 * p, th, th.time_constant_s) <
            xfmr::theta_rise(p, th, th.time_constant_s)) {
            ok = false;
            detail = "not monotone in P";
        }
    }
    report(8, "thermal: theta(inf) exact, theta(tau)/theta(inf) = 1-1/e, monotone", ok, detail);
}

// ---- 9. CLI end to end -----------------------------------------------------

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const fs::path& dir, const std::string& bin, const std::string& args) {
    const fs::path out_file = dir / "stdout.txt";
    const fs::path err_file = dir / "stderr.txt";
    const std::string cmd =
        bin + " " + args + " >" + out_file.string() + " 2>" + err_file.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp_file(out_file);
    r.err = slurp_file(err_file);
    return r;
}

std::string find_cli_binary(const char* argv0) {
    if (const char* env = std::getenv("GRIDHARM_BIN")) return env;
    // fall back to the sibling tools/ directory of this test binary
    std::error_code ec;
    const fs::path self = fs::canonical(argv0, ec);
    if (!ec) {
        const fs::path candidate = self.parent_path().parent_path() / "tools" / "gridharm";
        if (fs::exists(candidate)) return candidate.string();
    }
    return {};
}

void criterion_cli(const char* argv0) {
    bool ok = true;
    std::string detail;
    const std::string bin = find_cli_binary(argv0);
    if (bin.empty()) {
        report(9, "CLI end to end", false,
               "CLI binary not found (set GRIDHARM_BIN or build tools/gridharm)");
        return;
    }
    const fs::path tmp = fs::temp_directory_path() /
                         ("gridharm-accept-" + std::to_string(::getpid()));
    fs::create_directories(tmp);

    const auto start = std::chrono::steady_clock::now();
    const auto scen = run_cli(tmp, bin, "--out " + (tmp / "out").string() + " scenarios");
    const double elapsed = seconds_since(start);
    if (scen.exit_code != 0) { ok = false; detail = "scenarios exit != 0"; }
    if (elapsed >= 30.0) { ok = false; detail = "scenarios took " + std::to_string(elapsed) + " s"; }
    int rows = 0;
    std::istringstream lines(scen.out);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind("scenario-", 0) == 0) ++rows;
    if (rows != 5) { ok = false; detail = "expected 5 table rows, saw " + std::to_string(rows); }
    try {
        const auto doc = config::Json::parse(slurp_file(tmp / "out" / "report.json"));
        if (doc["schema_version"] != 1 || doc["scenarios"].size() != 5) {
            ok = false;
            detail = "report JSON shape wrong";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("report JSON unreadable: ") + e.what();
    }

    {
        std::ofstream bad(tmp / "bad.csv");
        bad << "time_s,current_a\n0,1\n5e-05,oops\n";
    }
    const auto bad_run = run_cli(tmp, bin, "analyze " + (tmp / "bad.csv").string());
    if (bad_run.exit_code == 0 || bad_run.err.rfind("E_CSV", 0) != 0) {
        ok = false;
        detail = "malformed CSV path did not fail with E_CSV";
    }

    {
        HarmonicSpectrum s(60.0);
        s.set(1, 1.0);
        csv::write_waveform((tmp / "slow.csv").string(), synthesize(s, 1.0, 1000.0));
    }
    const auto nyq_run = run_cli(tmp, bin, "analyze " + (tmp / "slow.csv").string());
    if (nyq_run.exit_code == 0 || nyq_run.err.rfind("E_NYQUIST", 0) != 0) {
        ok = false;
        detail = "Nyquist violation did not fail with E_NYQUIST";
    }

    std::error_code ec;
    fs::remove_all(tmp, ec);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f s", elapsed);
    report(9, "CLI: 5-row scenario run with schema-v1 JSON; E_CSV and E_NYQUIST paths", ok,
           detail.empty() ? buf : detail);
}

} // namespace

int main(int, char** argv) {
    criterion_fft_oracle();
    criterion_round_trip();
    criterion_formula_identities();
    criterion_derating();
    criterion_scenario_trends();
    criterion_pv_compensation();
    criterion_rectifier();
    criterion_thermal();
    criterion_cli(argv[0]);

    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
