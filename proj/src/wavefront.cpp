// SPDX-License-Identifier: Apache-2.0
#include "squint/wavefront.hpp"

#include <cmath>
#include <string>

#include "squint/seed.hpp"

namespace squint::wavefront {

namespace {

std::size_t leading_zeros(const std::vector<cplx>& x)
{
    std::size_t k = 0;
    while (k < x.size() && x[k] == cplx{}) {
        ++k;
    }
    return k;
}

std::size_t trailing_zeros(const std::vector<cplx>& x)
{
    std::size_t k = 0;
    while (k < x.size() && x[x.size() - 1 - k] == cplx{}) {
        ++k;
    }
    return k;
}

} // namespace

std::size_t required_guard(const analytic::ArrayConfig& cfg, double samples_per_cycle)
{
    const double spread = (cfg.n_elements - 1) * std::abs(cfg.delay_step_cycles()) * samples_per_cycle;
    return static_cast<std::size_t>(std::ceil(spread)) + 1;
}

ElementStreams propagate(const dsp::ComplexSignal& tx, const analytic::ArrayConfig& cfg,
                         double samples_per_cycle, Exec exec)
{
    cfg.validate();
    const std::size_t length = tx.size();
    const std::size_t guard = required_guard(cfg, samples_per_cycle);
    if (leading_zeros(tx.samples) < guard || trailing_zeros(tx.samples) < guard) {
        throw Error(ErrorCode::InsufficientGuard,
                    "tx needs at least " + std::to_string(guard) + " zero samples at both ends");
    }

    ElementStreams out;
    out.array = cfg;
    out.delay_step_samples = cfg.delay_step_cycles() * samples_per_cycle;
    out.samples_per_symbol = tx.samples_per_symbol;
    const int n_el = cfg.n_elements;
    const double max_delay = std::abs(out.delay_step_samples) * (n_el - 1);
    if (!(max_delay < static_cast<double>(length) / 4.0)) {
        throw Error(ErrorCode::DelayTooLarge, "array delay spread exceeds a quarter of the signal");
    }
    out.streams.resize(static_cast<std::size_t>(n_el));
    out.streams[0] = tx.samples;
    if (n_el == 1) {
        return out;
    }
    if (out.delay_step_samples == 0.0) {
        for (int n = 1; n < n_el; ++n) {
            out.streams[static_cast<std::size_t>(n)] = tx.samples;
        }
        return out;
    }

    const dsp::Fft plan(length);
    std::vector<cplx> spectrum = tx.samples;
    plan.forward(spectrum);
    for_each_index(static_cast<std::size_t>(n_el - 1), exec, [&](std::size_t i) {
        out.streams[i + 1] = propagate_element(spectrum, plan, cfg, out.delay_step_samples, i + 1);
    });
    return out;
}

std::vector<cplx> propagate_element(std::span<const cplx> tx_spectrum, const dsp::Fft& plan,
                                    const analytic::ArrayConfig& cfg, double delay_step_samples,
                                    std::size_t n)
{
    std::vector<cplx> x(tx_spectrum.begin(), tx_spectrum.end());
    dsp::apply_delay_ramp(x, static_cast<double>(n) * delay_step_samples);
    plan.inverse(x);
    const cplx rot = std::polar(1.0, -static_cast<double>(n) * cfg.phase_step());
    for (cplx& v : x) {
        v *= rot;
    }
    return x;
}

double noise_variance(double signal_power, double bandwidth_ratio, double snr_db)
{
    if (!(signal_power > 0.0)) {
        throw Error(ErrorCode::ZeroSignal, "cannot set an SNR relative to zero-power streams");
    }
    return signal_power * bandwidth_ratio / std::pow(10.0, snr_db / 10.0);
}

ElementStreams propagate(const dsp::ComplexSignal& tx, const analytic::ArrayConfig& cfg,
                         const dsp::SignalSpec& spec, Exec exec)
{
    return propagate(tx, cfg, spec.samples_per_cycle(), exec);
}

ElementStreams phase_align(ElementStreams streams, Exec exec)
{
    const double phase_step = streams.array.phase_step();
    if (phase_step == 0.0) {
        return streams;
    }
    std::vector<cplx> phasors(streams.n_elements());
    phasors[0] = cplx{1.0, 0.0};
    for (std::size_t n = 1; n < phasors.size(); ++n) {
        phasors[n] = std::polar(1.0, static_cast<double>(n) * phase_step);
    }
    // Element 0 carries no carrier rotation; leave it bit-exact.
    std::span<std::vector<cplx>> rest(streams.streams.data() + 1, streams.streams.size() - 1);
    kernels::rotate_streams(rest, std::span<const cplx>(phasors).subspan(1), exec);
    return streams;
}

ElementStreams add_noise(ElementStreams streams, double snr_db, std::uint64_t seed,
                         const NoiseReference& ref, Exec exec)
{
    if (std::isinf(snr_db) && snr_db > 0) {
        return streams;
    }
    double power = 0.0;
    if (ref.signal_power) {
        power = *ref.signal_power;
    } else {
        for (const auto& s : streams.streams) {
            power += dsp::mean_power(s);
        }
        power /= static_cast<double>(std::max<std::size_t>(1, streams.n_elements()));
    }
    const double variance = noise_variance(power, ref.bandwidth_ratio, snr_db);
    for_each_index(streams.n_elements(), exec, [&](std::size_t n) {
        dsp::add_gaussian_noise(streams.streams[n], variance, derive_seed(seed, n));
    });
    return streams;
}

} // namespace squint::wavefront
