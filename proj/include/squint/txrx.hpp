// SPDX-License-Identifier: Apache-2.0
//
// End-to-end receive chains: single-carrier QAM with RRC matched filtering,
// and CP-OFDM with a choice of combiner.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "squint/analytic.hpp"
#include "squint/combine.hpp"
#include "squint/dsp.hpp"
#include "squint/kernels.hpp"
#include "squint/ofdm.hpp"

namespace squint::txrx {

struct ToneMetrics {
    int tone_index = 0;
    double evm_db = 0;
    double ssir_db = 0;
};

/// Everything a run depends on.
struct SimConfig {
    analytic::ArrayConfig array;
    dsp::SignalSpec signal;
    std::optional<OfdmSpec> ofdm; ///< single-carrier when absent
    double snr_db = 20.0;         ///< per channel; +inf for noiseless
    combine::CombinerSpec combiner;
};

struct SimReport {
    double overall_evm_db = 0;
    double overall_ssir_db = 0;
    std::optional<std::vector<ToneMetrics>> per_tone; ///< OFDM only, length M
    std::vector<cplx> constellation;                  ///< received symbols (gain-corrected for OFDM)
    std::vector<cplx> constellation_ref;              ///< matching transmitted symbols
    std::optional<analytic::AnalyticReport> analytic; ///< absent at broadside
    SimConfig config;
    std::optional<std::pair<int, int>> reduced_sizing; ///< (N_o, M_o) actually used
};

/// Constellation points kept in a report.
inline constexpr std::size_t kConstellationPoints = 4096;

/// SC chain; EVM is measured without a gain fit, SSIR from a paired noiseless run.
/// Throws CombinerRequiresOfdm for IDFT combiners.
SimReport run_single_carrier(const analytic::ArrayConfig& cfg, const dsp::SignalSpec& spec,
                             double snr_db,
                             const combine::CombinerSpec& combiner = {},
                             Exec exec = Exec::Parallel);

/// OFDM chain; per-tone EVM with a complex gain fit, overall EVM is the RMS over tones.
SimReport run_ofdm(const analytic::ArrayConfig& cfg, const dsp::SignalSpec& spec,
                   const OfdmSpec& ofdm, double snr_db, const combine::CombinerSpec& combiner,
                   Exec exec = Exec::Parallel);

/// Dispatches on config.ofdm.
SimReport simulate(const SimConfig& config, Exec exec = Exec::Parallel);

/// Random QAM tone grid (n_ofdm_symbols x M).
ToneGrid random_grid(const OfdmSpec& ofdm, int order, std::uint64_t seed);

/// Per-element demodulated grids after the half-spread timing advance.
/// Exposed for tests of the frequency-domain combining route.
std::vector<std::vector<cplx>> element_grids(const wavefront::ElementStreams& aligned,
                                             const OfdmSpec& ofdm, std::size_t guard,
                                             Exec exec = Exec::Parallel);

/// Demodulates one combined stream (timing advance included).
ToneGrid demodulate_stream(const dsp::ComplexSignal& stream, double advance_samples,
                           const OfdmSpec& ofdm, std::size_t guard);

} // namespace squint::txrx
