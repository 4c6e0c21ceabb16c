// SPDX-License-Identifier: Apache-2.0
//
// OFDM framing. Tones 0..M-1 run low to high frequency with tone m0 on the
// carrier. The waveform is synthesized with a zero-padded (M * oversample)-point
// IDFT, so every tone sits strictly inside the simulated band and fractional
// delays are well defined for all of them.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "squint/dsp.hpp"

namespace squint::txrx {

using dsp::cplx;

struct OfdmSpec {
    int m_carriers = 64;     ///< M
    int cp_ratio_num = 2;          ///< cyclic prefix is cp_ratio_num/M of the useful symbol
    int n_ofdm_symbols = 200;
    int center_tone = -1;    ///< m0; negative selects M/2
    int oversample = 4;      ///< IDFT size is M * oversample

    void validate() const;
    int m0() const noexcept { return center_tone < 0 ? m_carriers / 2 : center_tone; }
    std::size_t fft_size() const noexcept { return static_cast<std::size_t>(m_carriers) * oversample; }
    std::size_t cp_samples() const noexcept { return static_cast<std::size_t>(cp_ratio_num) * oversample; }
    std::size_t symbol_samples() const noexcept { return fft_size() + cp_samples(); }
    /// DFT bin carrying tone m.
    std::size_t bin_of(int tone) const noexcept;
};

/// n_symbols x M tone values, row-major.
struct ToneGrid {
    std::size_t n_symbols = 0;
    std::size_t m_tones = 0;
    std::vector<cplx> values;

    cplx& at(std::size_t s, std::size_t m) { return values[s * m_tones + m]; }
    const cplx& at(std::size_t s, std::size_t m) const { return values[s * m_tones + m]; }
    /// All symbols of tone m.
    std::vector<cplx> tone(std::size_t m) const;
};

/// Unit-power tones give unit mean sample power.
dsp::ComplexSignal ofdm_modulate(const ToneGrid& grid, const OfdmSpec& ofdm);

/// Strips each CP and transforms the next M*oversample samples. `offset` is where
/// the first symbol (its CP) starts. Throws DimensionMismatch when the signal is
/// too short for n_ofdm_symbols.
ToneGrid ofdm_demodulate(const dsp::ComplexSignal& signal, const OfdmSpec& ofdm,
                         std::size_t offset = 0);

} // namespace squint::txrx
