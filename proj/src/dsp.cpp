// SPDX-License-Identifier: Apache-2.0
#include "squint/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace squint::dsp {

namespace {

constexpr double pi = std::numbers::pi;

struct QamGeometry {
    int levels;     // per axis
    int axis_bits;
    double scale;   // divides the integer grid to reach unit average power
};

QamGeometry qam_geometry(int order)
{
    switch (order) {
    case 4: return {2, 1, std::sqrt(2.0)};
    case 16: return {4, 2, std::sqrt(10.0)};
    case 64: return {8, 3, std::sqrt(42.0)};
    default:
        throw Error(ErrorCode::InvalidOrder,
                    "QAM order must be 4, 16 or 64, got " + std::to_string(order));
    }
}

int gray_encode(int level) { return level ^ (level >> 1); }

int gray_decode(int g)
{
    int b = g;
    while ((g >>= 1) != 0) {
        b ^= g;
    }
    return b;
}

double axis_amplitude(int bits, const QamGeometry& q)
{
    const int level = gray_decode(bits);
    return (2.0 * level - (q.levels - 1)) / q.scale;
}

int axis_decision(double x, const QamGeometry& q)
{
    const long level = std::lround((x * q.scale + (q.levels - 1)) / 2.0);
    const int clamped = static_cast<int>(std::clamp<long>(level, 0, q.levels - 1));
    return gray_encode(clamped);
}

} // namespace

void SignalSpec::validate() const
{
    if (!(fractional_bandwidth > 0.0 && fractional_bandwidth <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "fractional_bandwidth must be in (0, 1]");
    }
    qam_geometry(modulation_order);
    if (n_symbols < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_symbols must be >= 1");
    }
    if (!(rrc_rolloff > 0.0 && rrc_rolloff <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "rrc_rolloff must be in (0, 1]");
    }
    if (rrc_span < 2 || rrc_span % 2 != 0) {
        throw Error(ErrorCode::InvalidArgument, "rrc_span must be an even positive integer");
    }
    if (oversample < 4) {
        throw Error(ErrorCode::InvalidArgument, "oversample must be >= 4");
    }
}

ComplexSignal qam_map(std::span<const int> symbol_indices, int order)
{
    const QamGeometry q = qam_geometry(order);
    ComplexSignal out;
    out.samples.reserve(symbol_indices.size());
    const int mask = q.levels - 1;
    for (int idx : symbol_indices) {
        if (idx < 0 || idx >= order) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "symbol index " + std::to_string(idx) + " outside [0, " +
                            std::to_string(order) + ")");
        }
        out.samples.emplace_back(axis_amplitude(idx >> q.axis_bits, q),
                                 axis_amplitude(idx & mask, q));
    }
    return out;
}

std::vector<int> qam_demap(const ComplexSignal& signal, int order)
{
    const QamGeometry q = qam_geometry(order);
    std::vector<int> out;
    out.reserve(signal.size());
    for (const cplx& s : signal.samples) {
        out.push_back((axis_decision(s.real(), q) << q.axis_bits) | axis_decision(s.imag(), q));
    }
    return out;
}

std::vector<double> rrc_taps(double rolloff, int span, int oversample)
{
    if (!(rolloff > 0.0 && rolloff <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "RRC rolloff must be in (0, 1]");
    }
    if (span <= 0 || oversample <= 0) {
        throw Error(ErrorCode::InvalidArgument, "RRC span and oversample must be positive");
    }
    const int n = span * oversample + 1;
    const double b = rolloff;
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i - span * oversample / 2) / oversample;
        if (std::abs(t) < 1e-12) {
            h[i] = 1.0 - b + 4.0 * b / pi;
        } else if (std::abs(std::abs(4.0 * b * t) - 1.0) < 1e-9) {
            h[i] = b / std::sqrt(2.0) *
                   ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * b)) +
                    (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * b)));
        } else {
            h[i] = (std::sin(pi * t * (1.0 - b)) + 4.0 * b * t * std::cos(pi * t * (1.0 + b))) /
                   (pi * t * (1.0 - (4.0 * b * t) * (4.0 * b * t)));
        }
    }
    double energy = 0.0;
    for (double v : h) {
        energy += v * v;
    }
    const double norm = 1.0 / std::sqrt(energy);
    for (double& v : h) {
        v *= norm;
    }
    return h;
}

std::vector<cplx> convolve(std::span<const cplx> x, std::span<const double> taps)
{
    if (x.empty() || taps.empty()) {
        return {};
    }
    std::vector<cplx> y(x.size() + taps.size() - 1, cplx{});
    for (std::size_t i = 0; i < x.size(); ++i) {
        const cplx xi = x[i];
        if (xi == cplx{}) {
            continue;
        }
        cplx* out = y.data() + i;
        for (std::size_t k = 0; k < taps.size(); ++k) {
            out[k] += xi * taps[k];
        }
    }
    return y;
}

void apply_delay_ramp(std::span<cplx> spectrum, double delay)
{
    const std::size_t n = spectrum.size();
    if (n == 0 || delay == 0.0) {
        return;
    }
    const double step = -2.0 * pi * delay / static_cast<double>(n);
    // Phasor recurrence, re-anchored with an exact polar() every block.
    constexpr std::size_t block = 512;
    const std::size_t positive = (n + 1) / 2; // bins [0, positive) are non-negative frequencies
    for (std::size_t start = 0; start < n; start += block) {
        const std::size_t stop = std::min(n, start + block);
        const auto signed_bin = [&](std::size_t k) {
            return k < positive ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
        };
        std::size_t k = start;
        while (k < stop) {
            // A block may straddle the wrap to negative bins; restart the recurrence there.
            const std::size_t seg_end = (k < positive) ? std::min(stop, positive) : stop;
            cplx w = std::polar(1.0, step * signed_bin(k));
            const cplx dw = std::polar(1.0, step);
            for (; k < seg_end; ++k) {
                spectrum[k] *= w;
                w *= dw;
            }
        }
    }
}

ComplexSignal fractional_delay(const ComplexSignal& signal, double delay)
{
    const std::size_t n = signal.size();
    if (n == 0) {
        return signal;
    }
    if (!(std::abs(delay) < static_cast<double>(n) / 4.0)) {
        throw Error(ErrorCode::DelayTooLarge, "delay " + std::to_string(delay) +
                                                  " samples is not below length/4 = " +
                                                  std::to_string(static_cast<double>(n) / 4.0));
    }
    ComplexSignal out{{}, signal.samples_per_symbol};
    if (delay == std::round(delay)) {
        // Integer delays are an exact circular shift.
        const long shift = static_cast<long>(delay);
        const std::size_t r = static_cast<std::size_t>(((shift % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n));
        out.samples.resize(n);
        std::rotate_copy(signal.samples.begin(), signal.samples.end() - static_cast<long>(r),
                         signal.samples.end(), out.samples.begin());
        return out;
    }
    out.samples = signal.samples;
    const Fft plan(n);
    plan.forward(out.samples);
    apply_delay_ramp(out.samples, delay);
    plan.inverse(out.samples);
    return out;
}

double mean_power(std::span<const cplx> x)
{
    if (x.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (const cplx& v : x) {
        acc += std::norm(v);
    }
    return acc / static_cast<double>(x.size());
}

void add_gaussian_noise(std::span<cplx> x, double variance, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
    for (cplx& v : x) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v += cplx{re, im};
    }
}

ComplexSignal awgn(const ComplexSignal& signal, double snr_db, std::uint64_t seed,
                   std::optional<double> signal_power)
{
    if (std::isinf(snr_db) && snr_db > 0) {
        return signal;
    }
    const double p = signal_power ? *signal_power : mean_power(signal.samples);
    if (!(p > 0.0)) {
        throw Error(ErrorCode::ZeroSignal, "cannot set an SNR relative to a zero signal");
    }
    ComplexSignal out = signal;
    add_gaussian_noise(out.samples, p / std::pow(10.0, snr_db / 10.0), seed);
    return out;
}

cplx scalar_fit(std::span<const cplx> rx, std::span<const cplx> ref)
{
    cplx cross{};
    double rx_energy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        cross += std::conj(rx[i]) * ref[i];
        rx_energy += std::norm(rx[i]);
    }
    return rx_energy > 0.0 ? cross / rx_energy : cplx{};
}

EvmReport measure_evm(std::span<const cplx> rx, std::span<const cplx> ref, EvmFit fit,
                      bool keep_errors)
{
    if (rx.size() != ref.size() || rx.empty()) {
        throw Error(ErrorCode::LengthMismatch,
                    "rx has " + std::to_string(rx.size()) + " samples, ref has " +
                        std::to_string(ref.size()));
    }
    const double ref_power = mean_power(ref);
    if (!(ref_power > 0.0)) {
        throw Error(ErrorCode::ZeroReference, "reference symbols are all zero");
    }
    const cplx c = fit == EvmFit::ComplexScalar ? scalar_fit(rx, ref) : cplx{1.0, 0.0};

    EvmReport report;
    double err = 0.0;
    if (keep_errors) {
        report.per_symbol_errors.emplace();
        report.per_symbol_errors->reserve(rx.size());
    }
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double e = std::norm(c * rx[i] - ref[i]);
        err += e;
        if (keep_errors) {
            report.per_symbol_errors->push_back(e / ref_power);
        }
    }
    const double evm2 = err / static_cast<double>(rx.size()) / ref_power;
    report.evm_db = evm2 > 0.0 ? std::max(kEvmFloorDb, 10.0 * std::log10(evm2)) : kEvmFloorDb;
    report.mer_db = -report.evm_db;
    return report;
}

EvmReport measure_evm(const ComplexSignal& rx, const ComplexSignal& ref, EvmFit fit,
                      bool keep_errors)
{
    return measure_evm(std::span<const cplx>(rx.samples), std::span<const cplx>(ref.samples), fit,
                       keep_errors);
}

} // namespace squint::dsp
