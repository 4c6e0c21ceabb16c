// SPDX-License-Identifier: Apache-2.0
#include "squint/ofdm.hpp"

#include "squint/error.hpp"
#include "squint/fft.hpp"

#include <cmath>
#include <string>

namespace squint::txrx {

void OfdmSpec::validate() const
{
    if (m_carriers < 2) {
        throw Error(ErrorCode::InvalidArgument, "m_carriers must be >= 2");
    }
    if (cp_ratio_num < 1 || cp_ratio_num >= m_carriers) {
        throw Error(ErrorCode::InvalidArgument, "cp_ratio_num must satisfy 1 <= k < M");
    }
    if (n_ofdm_symbols < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_ofdm_symbols must be >= 1");
    }
    if (center_tone >= m_carriers) {
        throw Error(ErrorCode::InvalidArgument, "center_tone must lie in [0, M)");
    }
    if (oversample < 1) {
        throw Error(ErrorCode::InvalidArgument, "oversample must be >= 1");
    }
}

std::size_t OfdmSpec::bin_of(int tone) const noexcept
{
    const long f = static_cast<long>(fft_size());
    const long b = static_cast<long>(tone) - m0();
    return static_cast<std::size_t>(((b % f) + f) % f);
}

std::vector<cplx> ToneGrid::tone(std::size_t m) const
{
    std::vector<cplx> out(n_symbols);
    for (std::size_t s = 0; s < n_symbols; ++s) {
        out[s] = at(s, m);
    }
    return out;
}

dsp::ComplexSignal ofdm_modulate(const ToneGrid& grid, const OfdmSpec& ofdm)
{
    ofdm.validate();
    if (grid.m_tones != static_cast<std::size_t>(ofdm.m_carriers) ||
        grid.n_symbols != static_cast<std::size_t>(ofdm.n_ofdm_symbols) ||
        grid.values.size() != grid.n_symbols * grid.m_tones) {
        throw Error(ErrorCode::DimensionMismatch,
                    "grid is " + std::to_string(grid.n_symbols) + "x" + std::to_string(grid.m_tones) +
                        ", spec wants " + std::to_string(ofdm.n_ofdm_symbols) + "x" +
                        std::to_string(ofdm.m_carriers));
    }
    const std::size_t f = ofdm.fft_size();
    const std::size_t cp = ofdm.cp_samples();
    const dsp::Fft plan(f);
    // IDFT carries 1/F; scaling by F/sqrt(M) gives unit mean sample power.
    const double scale = static_cast<double>(f) / std::sqrt(static_cast<double>(ofdm.m_carriers));

    dsp::ComplexSignal out;
    out.samples.resize(grid.n_symbols * (f + cp));
    std::vector<cplx> buf(f);
    for (std::size_t s = 0; s < grid.n_symbols; ++s) {
        std::fill(buf.begin(), buf.end(), cplx{});
        for (std::size_t m = 0; m < grid.m_tones; ++m) {
            buf[ofdm.bin_of(static_cast<int>(m))] = grid.at(s, m);
        }
        plan.inverse(buf);
        cplx* dst = out.samples.data() + s * (f + cp);
        for (std::size_t i = 0; i < cp; ++i) {
            dst[i] = buf[f - cp + i] * scale;
        }
        for (std::size_t i = 0; i < f; ++i) {
            dst[cp + i] = buf[i] * scale;
        }
    }
    return out;
}

ToneGrid ofdm_demodulate(const dsp::ComplexSignal& signal, const OfdmSpec& ofdm, std::size_t offset)
{
    ofdm.validate();
    const std::size_t f = ofdm.fft_size();
    const std::size_t cp = ofdm.cp_samples();
    const std::size_t n_sym = static_cast<std::size_t>(ofdm.n_ofdm_symbols);
    if (offset + n_sym * (f + cp) > signal.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "signal too short for " + std::to_string(n_sym) + " OFDM symbols");
    }
    const dsp::Fft plan(f);
    const double scale = std::sqrt(static_cast<double>(ofdm.m_carriers)) / static_cast<double>(f);

    ToneGrid grid{n_sym, static_cast<std::size_t>(ofdm.m_carriers), {}};
    grid.values.resize(grid.n_symbols * grid.m_tones);
    std::vector<cplx> buf(f);
    for (std::size_t s = 0; s < n_sym; ++s) {
        const cplx* src = signal.samples.data() + offset + s * (f + cp) + cp;
        std::copy(src, src + f, buf.begin());
        plan.forward(buf);
        for (std::size_t m = 0; m < grid.m_tones; ++m) {
            grid.at(s, m) = buf[ofdm.bin_of(static_cast<int>(m))] * scale;
        }
    }
    return grid;
}

} // namespace squint::txrx
