// SPDX-License-Identifier: Apache-2.0
//
// Baseband image of a plane wave arriving at the array: element n sees the
// transmitted envelope delayed by n*dtau and rotated by the carrier phase of
// that delay. Phase shifters then undo the rotation but not the delay.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "squint/analytic.hpp"
#include "squint/dsp.hpp"
#include "squint/fft.hpp"
#include "squint/kernels.hpp"

namespace squint::wavefront {

using dsp::cplx;

struct ElementStreams {
    std::vector<std::vector<cplx>> streams; ///< one per element, equal lengths
    analytic::ArrayConfig array;
    double delay_step_samples = 0.0;        ///< dtau in samples
    double samples_per_symbol = 1.0;

    std::size_t n_elements() const noexcept { return streams.size(); }
    std::size_t length() const noexcept { return streams.empty() ? 0 : streams.front().size(); }
    dsp::ComplexSignal element(std::size_t n) const { return {streams.at(n), samples_per_symbol}; }
};

/// Zero samples needed at each end of tx so the circular delays (and the
/// receiver's half-spread timing advance) never wrap payload.
std::size_t required_guard(const analytic::ArrayConfig& cfg, double samples_per_cycle);

/// Splits tx into per-element received streams. `samples_per_cycle` converts
/// the carrier-cycle delay (d/lambda_0) sin(theta_0) into samples.
ElementStreams propagate(const dsp::ComplexSignal& tx, const analytic::ArrayConfig& cfg,
                         double samples_per_cycle, Exec exec = Exec::Parallel);

/// Single-carrier convenience: samples per cycle from the signal spec.
ElementStreams propagate(const dsp::ComplexSignal& tx, const analytic::ArrayConfig& cfg,
                         const dsp::SignalSpec& spec, Exec exec = Exec::Parallel);

/// Element n of propagate(), built from the forward spectrum of tx.
std::vector<cplx> propagate_element(std::span<const cplx> tx_spectrum, const dsp::Fft& plan,
                                    const analytic::ArrayConfig& cfg, double delay_step_samples,
                                    std::size_t n);

/// Noise variance per sample for a per-channel SNR.
double noise_variance(double signal_power, double bandwidth_ratio, double snr_db);

/// Phase shifters: element n multiplied by exp(+j n 2 pi (d/lambda_0) sin theta_0).
ElementStreams phase_align(ElementStreams streams, Exec exec = Exec::Parallel);

/// Reference for the per-channel SNR. Noise variance per sample is
/// signal_power * bandwidth_ratio / 10^(snr/10); bandwidth_ratio is the
/// oversampling factor when the SNR is quoted in the signal bandwidth.
struct NoiseReference {
    std::optional<double> signal_power; ///< measured mean stream power when absent
    double bandwidth_ratio = 1.0;
};

/// Independent AWGN per element, seeded by derive_seed(seed, element index).
ElementStreams add_noise(ElementStreams streams, double snr_db, std::uint64_t seed,
                         const NoiseReference& ref = {}, Exec exec = Exec::Parallel);

} // namespace squint::wavefront
