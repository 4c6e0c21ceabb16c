// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "squint/analytic.hpp"
#include "squint/error.hpp"
#include "squint/kernels.hpp"

#ifndef SQUINT_VERSION
#define SQUINT_VERSION "0.0.0-unknown"
#endif

namespace squint::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string fixed(double v)
{
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

json number_or_inf(double v)
{
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

json analytic_json(const analytic::AnalyticReport& a)
{
    json j;
    j["coherent_bw"] = a.coherent_bw;
    if (a.coherent_bw_numeric) j["coherent_bw_numeric"] = *a.coherent_bw_numeric;
    if (a.null_fractions) j["null_fractions"] = {a.null_fractions->first, a.null_fractions->second};
    j["isi_bw_limit"] = number_or_inf(a.isi_bw_limit);
    j["max_delay_spread_cycles"] = a.max_delay_spread;
    j["eirp_gain_db"] = a.eirp_gain_db;
    j["rx_snr_gain_db"] = a.rx_snr_gain_db;
    if (a.tone_bounds) {
        const auto& t = *a.tone_bounds;
        json tb;
        tb["null_low"] = t.null_low;
        tb["null_high"] = t.null_high;
        tb["null_low_tone"] = t.null_low_tone ? json(*t.null_low_tone) : json(nullptr);
        tb["null_high_tone"] = t.null_high_tone ? json(*t.null_high_tone) : json(nullptr);
        tb["m_3db"] = t.m_3db;
        j["tone_bounds"] = tb;
    }
    if (a.reduced_sizing) {
        const auto& r = *a.reduced_sizing;
        j["reduced_sizing"] = {{"n_sub", r.n_sub}, {"m_group", r.m_group}, {"n_rows", r.n_rows}, {"m_rows", r.m_rows}};
    }
    return j;
}

json config_json(const ExperimentConfig& c)
{
    json j;
    j["mode"] = c.carriers > 0 ? "ofdm" : "single_carrier";
    j["n_elements"] = c.n_elements;
    j["spacing_ratio"] = c.spacing_ratio;
    j["theta_deg"] = c.theta_deg;
    j["bw_frac"] = c.signal.fractional_bandwidth;
    j["modulation_order"] = c.signal.modulation_order;
    j["snr_db"] = number_or_inf(c.snr_db);
    j["seed"] = c.signal.seed;
    j["combiner"] = std::string(combine::to_string(c.combiner.kind));
    if (c.carriers > 0) {
        j["carriers"] = c.carriers;
        j["cp_num"] = c.cp_num;
        j["ofdm_symbols"] = c.ofdm_symbols;
        j["ofdm_oversample"] = c.ofdm_oversample;
    } else {
        j["symbols"] = c.signal.n_symbols;
        j["rrc_rolloff"] = c.signal.rrc_rolloff;
        j["rrc_span"] = c.signal.rrc_span;
        j["oversample"] = c.signal.oversample;
    }
    return j;
}

// Writes to cfg.out or to `out` when no path is set.
void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorCode::Config, path + ": cannot open for writing");
    }
    f << text;
}

// report.json -> report_tones.csv
std::string companion(const std::string& path, const std::string& suffix)
{
    std::filesystem::path p(path);
    const auto stem = p.stem().string();
    return (p.parent_path() / (stem + suffix)).string();
}

std::string tones_csv(const txrx::SimReport& r)
{
    std::string s = "tone,evm_db,ssir_db\n";
    if (r.per_tone) {
        for (const auto& t : *r.per_tone) {
            s += std::to_string(t.tone_index) + ',' + fixed(t.evm_db) + ',' + fixed(t.ssir_db) + '\n';
        }
    }
    return s;
}

std::string constellation_csv(const txrx::SimReport& r)
{
    std::string s = "re,im,ref_re,ref_im\n";
    char buf[160];
    for (std::size_t i = 0; i < r.constellation.size(); ++i) {
        const auto& y = r.constellation[i];
        const auto& x = r.constellation_ref[i];
        std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f,%.9f\n", y.real(), y.imag(), x.real(), x.imag());
        s += buf;
    }
    return s;
}

void cmd_analyze(const ExperimentConfig& c, Format format, std::ostream& out)
{
    const analytic::ArrayConfig array{c.n_elements, c.spacing_ratio, analytic::deg_to_rad(c.theta_deg)};
    array.validate();
    const auto rep = analytic::analyze(array, c.signal.fractional_bandwidth,
                                       c.carriers > 0 ? std::optional<int>(c.carriers) : std::nullopt);
    if (format == Format::Json) {
        json j;
        j["version"] = SQUINT_VERSION;
        j["command"] = "analyze";
        j["config"] = config_json(c);
        j["analytic"] = analytic_json(rep);
        emit(c.out, j.dump(2) + "\n", out);
        return;
    }
    std::string s = "key,value\n";
    const auto row = [&](const std::string& k, double v) { s += k + ',' + fixed(v) + '\n'; };
    row("coherent_bw", rep.coherent_bw);
    if (rep.coherent_bw_numeric) row("coherent_bw_numeric", *rep.coherent_bw_numeric);
    if (rep.null_fractions) {
        row("null_low", rep.null_fractions->first);
        row("null_high", rep.null_fractions->second);
    }
    row("isi_bw_limit", rep.isi_bw_limit);
    row("max_delay_spread_cycles", rep.max_delay_spread);
    row("eirp_gain_db", rep.eirp_gain_db);
    row("rx_snr_gain_db", rep.rx_snr_gain_db);
    if (rep.tone_bounds) {
        row("m_null_low", rep.tone_bounds->null_low);
        row("m_null_high", rep.tone_bounds->null_high);
        row("m_3db", rep.tone_bounds->m_3db);
    }
    if (rep.reduced_sizing) {
        row("n_sub", rep.reduced_sizing->n_sub);
        row("m_group", rep.reduced_sizing->m_group);
    }
    emit(c.out, s, out);
}

void cmd_simulate(const ExperimentConfig& c, Format format, bool timing, std::ostream& out)
{
    const auto sim = to_sim_config(c, 0);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = txrx::simulate(sim);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (format == Format::Csv) {
        emit(c.out, rep.per_tone ? tones_csv(rep) : constellation_csv(rep), out);
        if (!c.out.empty() && rep.per_tone) {
            emit(companion(c.out, "_constellation.csv"), constellation_csv(rep), out);
        }
        return;
    }
    json j;
    j["version"] = SQUINT_VERSION;
    j["command"] = "simulate";
    j["config"] = config_json(c);
    j["config_text"] = to_config_text(c);
    j["run_seed"] = sim.signal.seed;
    j["overall_evm_db"] = rep.overall_evm_db;
    j["overall_ssir_db"] = rep.overall_ssir_db;
    j["overall_mer_db"] = -rep.overall_evm_db;
    if (rep.reduced_sizing) {
        j["reduced_sizing"] = {{"n_sub", rep.reduced_sizing->first}, {"m_group", rep.reduced_sizing->second}};
    }
    if (rep.per_tone) {
        json tones = json::array();
        for (const auto& t : *rep.per_tone) {
            tones.push_back({{"tone", t.tone_index}, {"evm_db", t.evm_db}, {"ssir_db", t.ssir_db}});
        }
        j["per_tone"] = tones;
    }
    j["analytic"] = rep.analytic ? analytic_json(*rep.analytic) : json(nullptr);
    if (timing) {
        j["wall_time_s"] = wall;
    }
    emit(c.out, j.dump(2) + "\n", out);
    if (!c.out.empty()) {
        if (rep.per_tone) {
            emit(companion(c.out, "_tones.csv"), tones_csv(rep), out);
        }
        emit(companion(c.out, "_constellation.csv"), constellation_csv(rep), out);
    }
}

struct Cell {
    int n = 0;
    double theta_deg = 0;
    double bw = 0;
    std::optional<txrx::SimReport> report;
    std::string error;
};

void cmd_sweep(const ExperimentConfig& c, Format format, bool timing, std::ostream& out, std::ostream& err)
{
    const SweepAxes axes = c.sweep.value_or(SweepAxes{});
    if (axes.n_list.empty() || axes.theta_deg.empty()) {
        throw Error(ErrorCode::Config, "sweep axes must be non-empty");
    }
    const std::vector<double> bws = axes.bw_list.empty() ? std::vector<double>{c.signal.fractional_bandwidth}
                                                         : axes.bw_list;
    std::vector<Cell> cells;
    for (double bw : bws) {
        for (int n : axes.n_list) {
            for (double th : axes.theta_deg) {
                cells.push_back({n, th, bw, std::nullopt, {}});
            }
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    // Cells run concurrently, each one serially; the seed depends only on the cell index.
    for_each_index(cells.size(), Exec::Parallel, [&](std::size_t i) {
        ExperimentConfig cc = c;
        cc.n_elements = cells[i].n;
        cc.theta_deg = cells[i].theta_deg;
        cc.signal.fractional_bandwidth = cells[i].bw;
        try {
            cells[i].report = txrx::simulate(to_sim_config(cc, i), Exec::Serial);
        } catch (const Error& e) {
            cells[i].error = std::string(to_string(e.code()));
        }
    });
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (const auto& cell : cells) {
        if (!cell.error.empty()) {
            err << "sweep cell n=" << cell.n << " theta_deg=" << cell.theta_deg << " bw=" << cell.bw
                << " failed: " << cell.error << '\n';
        }
    }
    if (format == Format::Csv) {
        std::string s = "n_elements,theta_deg,bw_frac,ssir_db,evm_db\n";
        for (const auto& cell : cells) {
            s += std::to_string(cell.n) + ',' + fixed(cell.theta_deg) + ',' + fixed(cell.bw) + ',';
            if (cell.report) {
                s += fixed(cell.report->overall_ssir_db) + ',' + fixed(cell.report->overall_evm_db) + '\n';
            } else {
                s += "error:" + cell.error + ",error:" + cell.error + '\n';
            }
        }
        emit(c.out, s, out);
        return;
    }
    json j;
    j["version"] = SQUINT_VERSION;
    j["command"] = "sweep";
    j["config"] = config_json(c);
    j["config_text"] = to_config_text(c);
    json rows = json::array();
    for (const auto& cell : cells) {
        json r{{"n_elements", cell.n}, {"theta_deg", cell.theta_deg}, {"bw_frac", cell.bw}};
        if (cell.report) {
            r["ssir_db"] = cell.report->overall_ssir_db;
            r["evm_db"] = cell.report->overall_evm_db;
        } else {
            r["error"] = cell.error;
        }
        rows.push_back(r);
    }
    j["cells"] = rows;
    if (timing) {
        j["wall_time_s"] = wall;
    }
    emit(c.out, j.dump(2) + "\n", out);
}

bool is_config_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::Config:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IndivisibleSizing:
    case ErrorCode::CombinerRequiresOfdm:
        return true;
    default:
        return false;
    }
}

void apply_worker_env()
{
    if (const char* w = std::getenv("SQUINT_WORKERS")) {
        const int n = std::atoi(w);
        if (n > 0) {
            set_worker_count(n);
        }
    }
}

// Flag name -> config key. Flags override the config file.
struct FlagKey {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr FlagKey kFlags[] = {
    {"--n", "n", "Number of array elements"},
    {"--spacing", "spacing", "Element spacing over carrier wavelength"},
    {"--theta-deg", "theta_deg", "Steering angle in degrees"},
    {"--bw", "bw", "Fractional signal bandwidth"},
    {"--snr-db", "snr_db", "Per-channel SNR in dB, or inf"},
    {"--symbols", "symbols", "Single-carrier symbol count"},
    {"--carriers", "carriers", "OFDM subcarriers (0 = single-carrier)"},
    {"--cp-num", "cp_num", "Cyclic prefix length k, T_cp/T_sym = k/M"},
    {"--ofdm-symbols", "ofdm_symbols", "OFDM symbol count"},
    {"--combiner", "combiner", "ps, idft or reduced"},
    {"--n-sub", "n_sub", "Reduced IDFT elements per sub-array"},
    {"--m-group", "m_group", "Reduced IDFT tones per output"},
    {"--seed", "seed", "Base seed"},
    {"--sweep-n", "sweep_n", "Comma list of element counts"},
    {"--sweep-theta-deg", "sweep_theta_deg", "Comma list of steering angles"},
    {"--sweep-bw", "sweep_bw", "Comma list of bandwidths"},
    {"--out", "out", "Output path (stdout when absent)"},
    {"--format", "format", "csv or json"},
};

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Beam-squint analysis and simulation for wideband phased arrays", "squint"};
    app.set_version_flag("--version", std::string(SQUINT_VERSION));
    app.require_subcommand(1, 1);

    struct Sub {
        CLI::App* app;
        std::string config_path;
        std::vector<std::string> values;
        bool timing = false;
    };
    std::vector<Sub> subs;
    subs.reserve(3);
    for (const char* name : {"analyze", "simulate", "sweep"}) {
        Sub s{app.add_subcommand(name), {}, std::vector<std::string>(std::size(kFlags)), false};
        subs.push_back(std::move(s));
    }
    subs[0].app->description("Closed-form squint figures for one array");
    subs[1].app->description("Run one transceiver simulation");
    subs[2].app->description("SSIR/EVM over an (N, theta, BW) grid");
    for (auto& s : subs) {
        s.app->add_option("--config", s.config_path, "key = value configuration file");
        for (std::size_t i = 0; i < std::size(kFlags); ++i) {
            s.app->add_option(kFlags[i].flag, s.values[i], kFlags[i].help);
        }
        if (s.app->get_name() != "analyze") {
            s.app->add_flag("--timing", s.timing, "Add wall time to JSON output");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << SQUINT_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kExitOk : kExitConfig;
    }

    const Sub* active = nullptr;
    for (const auto& s : subs) {
        if (s.app->parsed()) {
            active = &s;
        }
    }
    try {
        apply_worker_env();
        ExperimentConfig cfg = active->config_path.empty() ? ExperimentConfig{} : load_config(active->config_path);
        for (std::size_t i = 0; i < std::size(kFlags); ++i) {
            if (active->app->get_option(kFlags[i].flag)->count() > 0) {
                set_key(cfg, kFlags[i].key, active->values[i], kFlags[i].flag);
            }
        }
        const std::string name = active->app->get_name();
        if (name == "analyze") {
            cmd_analyze(cfg, cfg.format.value_or(Format::Json), out);
        } else if (name == "simulate") {
            cmd_simulate(cfg, cfg.format.value_or(Format::Json), active->timing, out);
        } else {
            cmd_sweep(cfg, cfg.format.value_or(Format::Csv), active->timing, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_config_error(e.code()) ? kExitConfig : kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace squint::cli
