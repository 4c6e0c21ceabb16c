// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: configuration files, the analyze/simulate/sweep
// subcommands and their CSV/JSON writers.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squint/combine.hpp"
#include "squint/dsp.hpp"
#include "squint/txrx.hpp"

namespace squint::cli {

enum class Format { Csv, Json };

struct SweepAxes {
    std::vector<int> n_list{4, 8, 16, 32, 64};
    std::vector<double> theta_deg{10, 20, 30, 45, 60};
    std::vector<double> bw_list; ///< empty: the configured bandwidth only
};

// Angles stay in degrees here so a config echo re-parses to identical bits.
struct ExperimentConfig {
    int n_elements = 8;
    double spacing_ratio = 0.5;
    double theta_deg = 30.0;
    dsp::SignalSpec signal;          ///< signal.seed is the base seed
    int carriers = 0;                ///< 0 selects single-carrier
    int cp_num = 2;
    int ofdm_symbols = 200;
    int center_tone = -1;
    int ofdm_oversample = 4;
    double snr_db = 20.0;            ///< +inf for noiseless
    combine::CombinerSpec combiner;
    std::optional<SweepAxes> sweep;
    std::string out;                 ///< empty writes to stdout
    std::optional<Format> format;
};

/// Sets one key from its text value; `where` prefixes error messages.
/// Throws Error(Config) for unknown keys and malformed values.
void set_key(ExperimentConfig& cfg, std::string_view key, std::string_view value,
             const std::string& where);

/// key = value lines, '#' comments. Errors carry origin:line.
ExperimentConfig parse_config(std::string_view text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const ExperimentConfig& cfg);

/// Run configuration of sweep cell `cell` (simulate is cell 0).
txrx::SimConfig to_sim_config(const ExperimentConfig& cfg, std::uint64_t cell = 0);

/// Exit codes: 0 ok, 2 configuration error, 3 runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace squint::cli
