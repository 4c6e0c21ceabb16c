// SPDX-License-Identifier: Apache-2.0
//
// Baseband signal-processing primitives shared by the transceiver chains.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "squint/error.hpp"
#include "squint/fft.hpp"

namespace squint::dsp {

/// Sampled complex baseband stream. `samples_per_symbol` records the sampling
/// context (oversampling factor) the samples were produced at.
struct ComplexSignal {
    std::vector<cplx> samples;
    double samples_per_symbol = 1.0;

    std::size_t size() const noexcept { return samples.size(); }
    cplx& operator[](std::size_t i) { return samples[i]; }
    const cplx& operator[](std::size_t i) const { return samples[i]; }
};

/// Single-carrier signal parameters. The symbol period is 1/BW_sig carrier
/// cycles, so BW_sig also sets how many carrier cycles one sample spans.
struct SignalSpec {
    double fractional_bandwidth = 0.2; ///< BW_sig
    int modulation_order = 16;
    int n_symbols = 10000;
    double rrc_rolloff = 0.25;
    int rrc_span = 32;
    int oversample = 8;
    std::uint64_t seed = 1;

    void validate() const;
    /// Samples per carrier cycle at this oversampling, BW_sig * oversample.
    double samples_per_cycle() const noexcept { return fractional_bandwidth * oversample; }
};

/// Gray-mapped square QAM with unit average power. Orders 4, 16 and 64.
ComplexSignal qam_map(std::span<const int> symbol_indices, int order);

/// Nearest-point decisions on the same constellation. Points exactly between two
/// levels resolve to the higher level on each axis.
std::vector<int> qam_demap(const ComplexSignal& signal, int order);

/// Unit-energy root-raised-cosine taps, `span * oversample + 1` long, centered.
std::vector<double> rrc_taps(double rolloff, int span, int oversample);

/// Full linear convolution of a complex stream with real taps.
std::vector<cplx> convolve(std::span<const cplx> x, std::span<const double> taps);

/// Circular delay by `delay` samples through a linear phase ramp on the DFT.
/// Integer delays reproduce a circular shift. Throws DelayTooLarge when
/// |delay| >= length/4.
ComplexSignal fractional_delay(const ComplexSignal& signal, double delay);

/// Applies the same ramp to a spectrum already in DFT order (bins above L/2
/// are negative frequencies, Nyquist counts as -L/2).
void apply_delay_ramp(std::span<cplx> spectrum, double delay);

/// Mean |x|^2.
double mean_power(std::span<const cplx> x);

/// Adds circular complex Gaussian noise with variance P / 10^(snr/10), where P
/// is `signal_power` when given and the measured mean power otherwise.
/// snr_db = +inf leaves the signal untouched.
ComplexSignal awgn(const ComplexSignal& signal, double snr_db, std::uint64_t seed,
                   std::optional<double> signal_power = std::nullopt);

/// In-place variant writing noise of the given variance.
void add_gaussian_noise(std::span<cplx> x, double variance, std::uint64_t seed);

enum class EvmFit {
    ComplexScalar, ///< one least-squares complex gain applied to rx before comparison
    None,          ///< rx compared to ref as-is
};

struct EvmReport {
    double evm_db = 0;
    double mer_db = 0; ///< always -evm_db
    std::optional<std::vector<double>> per_symbol_errors; ///< |e_k|^2 / mean |ref|^2
};

inline constexpr double kEvmFloorDb = -120.0;

EvmReport measure_evm(const ComplexSignal& rx, const ComplexSignal& ref,
                      EvmFit fit = EvmFit::ComplexScalar, bool keep_errors = false);
EvmReport measure_evm(std::span<const cplx> rx, std::span<const cplx> ref,
                      EvmFit fit = EvmFit::ComplexScalar, bool keep_errors = false);

/// The gain c minimizing |c rx - ref|^2 (zero when rx is all zero).
cplx scalar_fit(std::span<const cplx> rx, std::span<const cplx> ref);

} // namespace squint::dsp
