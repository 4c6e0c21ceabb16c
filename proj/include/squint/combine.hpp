// SPDX-License-Identifier: Apache-2.0
//
// Receive combiners: phase-shifter sum, full spatial IDFT and the reduced
// (sub-array x tone-group) IDFT.
#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "squint/analytic.hpp"
#include "squint/dsp.hpp"
#include "squint/kernels.hpp"
#include "squint/ofdm.hpp"
#include "squint/wavefront.hpp"

namespace squint::combine {

using dsp::cplx;

enum class CombinerKind { PhaseShifterSum, FullIdft, ReducedIdft };

std::string_view to_string(CombinerKind kind) noexcept;
/// Accepts "ps", "idft", "reduced".
CombinerKind parse_kind(std::string_view name);

struct CombinerSpec {
    CombinerKind kind = CombinerKind::PhaseShifterSum;
    std::optional<int> n_sub;   ///< reduced only; automatic when absent
    std::optional<int> m_group;
};

/// Unit-modulus weight matrix, rows = IDFT outputs, cols = element (or sub-array).
struct IdftWeights {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> phase; ///< radians, row-major

    cplx at(std::size_t r, std::size_t c) const { return std::polar(1.0, phase[r * cols + c]); }
    std::vector<cplx> row(std::size_t r) const;
};

/// Phase that re-aligns element n for tone m:
/// 2 pi n (d/lambda_0) sin(theta_0) (BW/M) (m - m0).
double idft_phase(const analytic::ArrayConfig& cfg, double bw_sig, int m_carriers, double n,
                  double tone_offset);

/// M x N weights of the full spatial IDFT.
IdftWeights full_idft_weights(const analytic::ArrayConfig& cfg, double bw_sig,
                              const txrx::OfdmSpec& ofdm);

/// M_r x N_r weights; sub-array r spans elements [r N_o, (r+1) N_o) and output
/// g serves tones [g M_o, (g+1) M_o), phased for the group's centre tone.
IdftWeights reduced_idft_weights(const analytic::ArrayConfig& cfg, double bw_sig,
                                 const txrx::OfdmSpec& ofdm, int n_sub, int m_group);

/// (N_o, M_o) for a reduced combiner: explicit values are checked for
/// divisibility (IndivisibleSizing), missing ones come from reduced_sizing.
std::pair<int, int> resolve_reduced(const CombinerSpec& spec, const analytic::ArrayConfig& cfg,
                                    double bw_sig, const txrx::OfdmSpec& ofdm);

/// Sum of phase-aligned streams divided by N.
dsp::ComplexSignal phase_sum(const wavefront::ElementStreams& aligned, Exec exec = Exec::Parallel);

/// M output streams; output m is sum_n w[m][n] x_n / N.
std::vector<dsp::ComplexSignal> full_idft_combine(const wavefront::ElementStreams& aligned,
                                                  double bw_sig, const txrx::OfdmSpec& ofdm,
                                                  Exec exec = Exec::Parallel);

struct ReducedOutput {
    std::vector<dsp::ComplexSignal> outputs; ///< M_r streams
    int n_sub = 1;
    int m_group = 1;
    /// Output serving tone m.
    std::size_t output_for_tone(int m) const { return static_cast<std::size_t>(m / m_group); }
};

/// Pre-sums each sub-array, then an M_r x N_r IDFT.
ReducedOutput reduced_idft_combine(const wavefront::ElementStreams& aligned, double bw_sig,
                                   const txrx::OfdmSpec& ofdm, int n_sub, int m_group,
                                   Exec exec = Exec::Parallel);

/// Per-tone M x N element weights (row-major) equivalent to the combiner,
/// for combining after per-element demodulation.
std::vector<cplx> tone_weights(const CombinerSpec& spec, const analytic::ArrayConfig& cfg,
                               double bw_sig, const txrx::OfdmSpec& ofdm);

/// CSV: header "output,e0,e1,..." then one row of phases (radians) per output.
void write_weights_csv(std::ostream& os, const IdftWeights& w);

} // namespace squint::combine
