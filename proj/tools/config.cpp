// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cli.hpp"
#include "squint/error.hpp"
#include "squint/seed.hpp"

namespace squint::cli {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& where, std::string_view key, std::string_view value,
                            std::string_view expect)
{
    throw Error(ErrorCode::Config, where + ": " + std::string(key) + ": invalid value '" +
                                       std::string(value) + "' (expected " + std::string(expect) + ")");
}

template <class T>
T parse_number(std::string_view key, std::string_view value, const std::string& where)
{
    value = trim(value);
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
        bad_value(where, key, value, std::is_integral_v<T> ? "an integer" : "a number");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) {
            bad_value(where, key, value, "a finite number");
        }
    }
    return out;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view value, const std::string& where)
{
    std::vector<T> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto item = value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_number<T>(key, item, where));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& xs)
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        if constexpr (std::is_integral_v<T>) {
            s += std::to_string(xs[i]);
        } else {
            s += num(xs[i]);
        }
    }
    return s;
}

SweepAxes& sweep_of(ExperimentConfig& cfg)
{
    if (!cfg.sweep) {
        cfg.sweep.emplace();
    }
    return *cfg.sweep;
}

} // namespace

void set_key(ExperimentConfig& cfg, std::string_view key, std::string_view value, const std::string& where)
{
    value = trim(value);
    const auto integer = [&] { return parse_number<int>(key, value, where); };
    const auto real = [&] { return parse_number<double>(key, value, where); };

    if (key == "n") cfg.n_elements = integer();
    else if (key == "spacing") cfg.spacing_ratio = real();
    else if (key == "theta_deg") cfg.theta_deg = real();
    else if (key == "bw") cfg.signal.fractional_bandwidth = real();
    else if (key == "modulation") cfg.signal.modulation_order = integer();
    else if (key == "symbols") cfg.signal.n_symbols = integer();
    else if (key == "rolloff") cfg.signal.rrc_rolloff = real();
    else if (key == "rrc_span") cfg.signal.rrc_span = integer();
    else if (key == "oversample") cfg.signal.oversample = integer();
    else if (key == "seed") cfg.signal.seed = parse_number<std::uint64_t>(key, value, where);
    else if (key == "carriers") cfg.carriers = integer();
    else if (key == "cp_num") cfg.cp_num = integer();
    else if (key == "ofdm_symbols") cfg.ofdm_symbols = integer();
    else if (key == "center_tone") cfg.center_tone = integer();
    else if (key == "ofdm_oversample") cfg.ofdm_oversample = integer();
    else if (key == "snr_db") {
        cfg.snr_db = (value == "inf") ? std::numeric_limits<double>::infinity() : real();
    } else if (key == "combiner") {
        try {
            cfg.combiner.kind = combine::parse_kind(value);
        } catch (const Error&) {
            bad_value(where, key, value, "ps, idft or reduced");
        }
    } else if (key == "n_sub") cfg.combiner.n_sub = integer();
    else if (key == "m_group") cfg.combiner.m_group = integer();
    else if (key == "sweep_n") sweep_of(cfg).n_list = parse_list<int>(key, value, where);
    else if (key == "sweep_theta_deg") sweep_of(cfg).theta_deg = parse_list<double>(key, value, where);
    else if (key == "sweep_bw") sweep_of(cfg).bw_list = parse_list<double>(key, value, where);
    else if (key == "out") cfg.out = std::string(value);
    else if (key == "format") {
        if (value == "csv") cfg.format = Format::Csv;
        else if (value == "json") cfg.format = Format::Json;
        else bad_value(where, key, value, "csv or json");
    } else {
        throw Error(ErrorCode::Config, where + ": unknown key '" + std::string(key) + "'");
    }
}

ExperimentConfig parse_config(std::string_view text, const std::string& origin)
{
    ExperimentConfig cfg;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = origin + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::Config, where + ": expected 'key = value'");
        }
        set_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1), where);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Config, path + ": cannot open config file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string to_config_text(const ExperimentConfig& cfg)
{
    std::ostringstream os;
    os << "n = " << cfg.n_elements << '\n'
       << "spacing = " << num(cfg.spacing_ratio) << '\n'
       << "theta_deg = " << num(cfg.theta_deg) << '\n'
       << "bw = " << num(cfg.signal.fractional_bandwidth) << '\n'
       << "modulation = " << cfg.signal.modulation_order << '\n'
       << "symbols = " << cfg.signal.n_symbols << '\n'
       << "rolloff = " << num(cfg.signal.rrc_rolloff) << '\n'
       << "rrc_span = " << cfg.signal.rrc_span << '\n'
       << "oversample = " << cfg.signal.oversample << '\n'
       << "seed = " << cfg.signal.seed << '\n'
       << "carriers = " << cfg.carriers << '\n'
       << "cp_num = " << cfg.cp_num << '\n'
       << "ofdm_symbols = " << cfg.ofdm_symbols << '\n'
       << "center_tone = " << cfg.center_tone << '\n'
       << "ofdm_oversample = " << cfg.ofdm_oversample << '\n'
       << "snr_db = " << (std::isinf(cfg.snr_db) ? std::string("inf") : num(cfg.snr_db)) << '\n'
       << "combiner = " << combine::to_string(cfg.combiner.kind) << '\n';
    if (cfg.combiner.n_sub) os << "n_sub = " << *cfg.combiner.n_sub << '\n';
    if (cfg.combiner.m_group) os << "m_group = " << *cfg.combiner.m_group << '\n';
    if (cfg.sweep) {
        os << "sweep_n = " << join(cfg.sweep->n_list) << '\n'
           << "sweep_theta_deg = " << join(cfg.sweep->theta_deg) << '\n';
        if (!cfg.sweep->bw_list.empty()) {
            os << "sweep_bw = " << join(cfg.sweep->bw_list) << '\n';
        }
    }
    return os.str();
}

txrx::SimConfig to_sim_config(const ExperimentConfig& cfg, std::uint64_t cell)
{
    txrx::SimConfig sim;
    sim.array = {cfg.n_elements, cfg.spacing_ratio, analytic::deg_to_rad(cfg.theta_deg)};
    sim.signal = cfg.signal;
    sim.signal.seed = derive_seed(cfg.signal.seed, cell);
    if (cfg.carriers > 0) {
        sim.ofdm = txrx::OfdmSpec{cfg.carriers, cfg.cp_num, cfg.ofdm_symbols, cfg.center_tone, cfg.ofdm_oversample};
    }
    sim.snr_db = cfg.snr_db;
    sim.combiner = cfg.combiner;
    return sim;
}

} // namespace squint::cli
