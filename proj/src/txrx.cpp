// SPDX-License-Identifier: Apache-2.0
#include "squint/txrx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "squint/error.hpp"
#include "squint/fft.hpp"
#include "squint/seed.hpp"
#include "squint/wavefront.hpp"

namespace squint::txrx {

namespace {

// Zero padding beyond the strict delay guard; absorbs the tails of the
// band-limited interpolation.
constexpr std::size_t kScMargin = 4096;
constexpr std::size_t kOfdmMargin = 512;

std::vector<int> random_indices(std::size_t count, int order, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, order - 1);
    std::vector<int> idx(count);
    for (int& v : idx) {
        v = pick(rng);
    }
    return idx;
}

// guard zeros, payload, guard zeros, then zeros up to a power of two.
std::vector<cplx> framed(std::span<const cplx> payload, std::size_t guard)
{
    const std::size_t len = dsp::next_pow2(payload.size() + 2 * guard);
    std::vector<cplx> out(len);
    std::copy(payload.begin(), payload.end(), out.begin() + static_cast<long>(guard));
    return out;
}

double db_mean(std::span<const double> db)
{
    double acc = 0.0;
    for (double v : db) {
        acc += std::pow(10.0, v / 10.0);
    }
    const double mean = acc / static_cast<double>(db.size());
    return mean > 0.0 ? std::max(dsp::kEvmFloorDb, 10.0 * std::log10(mean)) : dsp::kEvmFloorDb;
}

bool noiseless(double snr_db) { return std::isinf(snr_db) && snr_db > 0; }

std::optional<analytic::AnalyticReport> try_analyze(const analytic::ArrayConfig& cfg, double bw,
                                                    std::optional<int> m)
{
    try {
        return analytic::analyze(cfg, bw, m);
    } catch (const Error&) {
        return std::nullopt;
    }
}

double half_spread(const analytic::ArrayConfig& cfg, double delay_step_samples)
{
    return (cfg.n_elements - 1) * delay_step_samples / 2.0;
}

} // namespace

ToneGrid random_grid(const OfdmSpec& ofdm, int order, std::uint64_t seed)
{
    ofdm.validate();
    ToneGrid g{static_cast<std::size_t>(ofdm.n_ofdm_symbols), static_cast<std::size_t>(ofdm.m_carriers), {}};
    g.values = dsp::qam_map(random_indices(g.n_symbols * g.m_tones, order, seed), order).samples;
    return g;
}

ToneGrid demodulate_stream(const dsp::ComplexSignal& stream, double advance_samples,
                           const OfdmSpec& ofdm, std::size_t guard)
{
    if (advance_samples == 0.0) {
        return ofdm_demodulate(stream, ofdm, guard);
    }
    return ofdm_demodulate(dsp::fractional_delay(stream, -advance_samples), ofdm, guard);
}

std::vector<std::vector<cplx>> element_grids(const wavefront::ElementStreams& aligned,
                                             const OfdmSpec& ofdm, std::size_t guard, Exec exec)
{
    const double advance = half_spread(aligned.array, aligned.delay_step_samples);
    std::vector<std::vector<cplx>> grids(aligned.n_elements());
    for_each_index(grids.size(), exec, [&](std::size_t n) {
        grids[n] = demodulate_stream(aligned.element(n), advance, ofdm, guard).values;
    });
    return grids;
}

SimReport run_single_carrier(const analytic::ArrayConfig& cfg, const dsp::SignalSpec& spec,
                             double snr_db, const combine::CombinerSpec& combiner, Exec exec)
{
    if (combiner.kind != combine::CombinerKind::PhaseShifterSum) {
        throw Error(ErrorCode::CombinerRequiresOfdm,
                    std::string("combiner '") + std::string(combine::to_string(combiner.kind)) +
                        "' needs an OFDM signal");
    }
    cfg.validate();
    spec.validate();
    const std::size_t n_sym = static_cast<std::size_t>(spec.n_symbols);
    const std::size_t os = static_cast<std::size_t>(spec.oversample);

    const auto symbols = dsp::qam_map(random_indices(n_sym, spec.modulation_order, derive_seed(spec.seed, 0)),
                                      spec.modulation_order);
    const auto taps = dsp::rrc_taps(spec.rrc_rolloff, spec.rrc_span, spec.oversample);
    std::vector<cplx> up(n_sym * os);
    for (std::size_t k = 0; k < n_sym; ++k) {
        up[k * os] = symbols.samples[k];
    }
    const auto shaped = dsp::convolve(up, taps);
    const double spc = spec.samples_per_cycle();
    const std::size_t guard = wavefront::required_guard(cfg, spc) + kScMargin;
    const dsp::ComplexSignal tx{framed(shaped, guard), static_cast<double>(os)};

    const auto streams = wavefront::propagate(tx, cfg, spc, exec);
    const double advance = half_spread(cfg, streams.delay_step_samples);
    const std::size_t first = guard + taps.size() - 1;

    const auto receive = [&](double snr) {
        // Unit-energy taps spread unit-power symbols over os samples.
        const wavefront::NoiseReference ref{1.0 / static_cast<double>(os), static_cast<double>(os)};
        auto aligned = wavefront::phase_align(wavefront::add_noise(streams, snr, derive_seed(spec.seed, 1), ref, exec), exec);
        auto sum = combine::phase_sum(aligned, exec);
        if (advance != 0.0) {
            sum = dsp::fractional_delay(sum, -advance);
        }
        // Matched filter evaluated only at the symbol instants.
        std::vector<cplx> rx(n_sym);
        for_each_index(n_sym, exec, [&](std::size_t k) {
            const std::size_t centre = first + k * os;
            cplx acc{};
            for (std::size_t j = 0; j < taps.size(); ++j) {
                acc += taps[j] * sum.samples[centre - j];
            }
            rx[k] = acc;
        });
        return rx;
    };

    const auto clean = receive(std::numeric_limits<double>::infinity());
    const auto noisy = noiseless(snr_db) ? clean : receive(snr_db);

    SimReport rep;
    rep.overall_ssir_db = -dsp::measure_evm(clean, symbols.samples, dsp::EvmFit::None).evm_db;
    rep.overall_evm_db = dsp::measure_evm(noisy, symbols.samples, dsp::EvmFit::None).evm_db;
    const std::size_t keep = std::min(n_sym, kConstellationPoints);
    rep.constellation.assign(noisy.begin(), noisy.begin() + static_cast<long>(keep));
    rep.constellation_ref.assign(symbols.samples.begin(), symbols.samples.begin() + static_cast<long>(keep));
    rep.analytic = try_analyze(cfg, spec.fractional_bandwidth, std::nullopt);
    rep.config = SimConfig{cfg, spec, std::nullopt, snr_db, combiner};
    return rep;
}

SimReport run_ofdm(const analytic::ArrayConfig& cfg, const dsp::SignalSpec& spec, const OfdmSpec& ofdm,
                   double snr_db, const combine::CombinerSpec& combiner, Exec exec)
{
    cfg.validate();
    spec.validate();
    ofdm.validate();
    const double bw = spec.fractional_bandwidth;
    const auto weights = combine::tone_weights(combiner, cfg, bw, ofdm);

    const auto grid = random_grid(ofdm, spec.modulation_order, derive_seed(spec.seed, 0));
    const auto payload = ofdm_modulate(grid, ofdm);
    const double spc = bw * ofdm.oversample;
    const std::size_t guard = wavefront::required_guard(cfg, spc) + kOfdmMargin;
    const dsp::ComplexSignal tx{framed(payload.samples, guard), 1.0};
    if (!(std::abs(cfg.delay_step_cycles() * spc) * (cfg.n_elements - 1) < tx.size() / 4.0)) {
        throw Error(ErrorCode::DelayTooLarge, "array delay spread exceeds a quarter of the frame");
    }

    // Elements are processed one at a time so only the tone grids stay in
    // memory. The carrier rotation and the phase shifter cancel, and the
    // timing advance folds into the propagation delay ramp. Noise is added
    // after the advance and phase shift: both are unitary, so white Gaussian
    // noise keeps its statistics, and demodulation being linear the noisy
    // grid is the clean grid plus the demodulated noise.
    const std::size_t n_el = static_cast<std::size_t>(cfg.n_elements);
    const double delay = cfg.delay_step_cycles() * spc;
    const double advance = half_spread(cfg, delay);
    const dsp::Fft plan(tx.size());
    std::vector<cplx> spectrum = tx.samples;
    plan.forward(spectrum);
    const bool with_noise = !noiseless(snr_db);
    // modulate() yields unit sample power; the noise is quoted in the occupied band.
    const double variance = with_noise
                                ? wavefront::noise_variance(1.0, static_cast<double>(ofdm.oversample), snr_db)
                                : 0.0;
    const std::uint64_t noise_seed = derive_seed(spec.seed, 1);

    std::vector<std::vector<cplx>> clean(n_el);
    std::vector<std::vector<cplx>> noisy(with_noise ? n_el : 0);
    for_each_index(n_el, exec, [&](std::size_t n) {
        std::vector<cplx> x = spectrum;
        dsp::apply_delay_ramp(x, static_cast<double>(n) * delay - advance);
        plan.inverse(x);
        clean[n] = ofdm_demodulate({std::move(x), 1.0}, ofdm, guard).values;
        if (!with_noise) {
            return;
        }
        std::vector<cplx> w(payload.size());
        dsp::add_gaussian_noise(w, variance, derive_seed(noise_seed, n));
        noisy[n] = ofdm_demodulate({std::move(w), 1.0}, ofdm).values;
        for (std::size_t i = 0; i < noisy[n].size(); ++i) {
            noisy[n][i] += clean[n][i];
        }
    });

    const std::size_t n_sym = grid.n_symbols;
    const std::size_t m_tones = grid.m_tones;
    const double scale = 1.0 / static_cast<double>(n_el);
    const ToneGrid rx_clean{n_sym, m_tones, kernels::combine_tones(clean, weights, n_sym, m_tones, scale, exec)};
    const ToneGrid rx_noisy = with_noise
        ? ToneGrid{n_sym, m_tones, kernels::combine_tones(noisy, weights, n_sym, m_tones, scale, exec)}
        : rx_clean;

    SimReport rep;
    std::vector<ToneMetrics> tones(m_tones);
    std::vector<double> evm_db(m_tones);
    std::vector<double> clean_db(m_tones);
    std::vector<cplx> gains(m_tones);
    for_each_index(m_tones, exec, [&](std::size_t m) {
        const auto ref = grid.tone(m);
        const auto y = rx_noisy.tone(m);
        clean_db[m] = dsp::measure_evm(rx_clean.tone(m), ref).evm_db;
        evm_db[m] = with_noise ? dsp::measure_evm(y, ref).evm_db : clean_db[m];
        gains[m] = dsp::scalar_fit(y, ref);
        tones[m] = ToneMetrics{static_cast<int>(m), evm_db[m], -clean_db[m]};
    });
    rep.overall_evm_db = db_mean(evm_db);
    rep.overall_ssir_db = -db_mean(clean_db);
    rep.per_tone = std::move(tones);

    // Symbol-major walk over the grid, gain-corrected per tone.
    const std::size_t keep = std::min(n_sym * m_tones, kConstellationPoints);
    rep.constellation.resize(keep);
    rep.constellation_ref.resize(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t m = i % m_tones;
        rep.constellation[i] = gains[m] * rx_noisy.values[i];
        rep.constellation_ref[i] = grid.values[i];
    }
    rep.analytic = try_analyze(cfg, bw, ofdm.m_carriers);
    rep.config = SimConfig{cfg, spec, ofdm, snr_db, combiner};
    if (combiner.kind == combine::CombinerKind::ReducedIdft) {
        rep.reduced_sizing = combine::resolve_reduced(combiner, cfg, bw, ofdm);
    }
    return rep;
}

SimReport simulate(const SimConfig& config, Exec exec)
{
    if (config.ofdm) {
        return run_ofdm(config.array, config.signal, *config.ofdm, config.snr_db, config.combiner, exec);
    }
    return run_single_carrier(config.array, config.signal, config.snr_db, config.combiner, exec);
}

} // namespace squint::txrx
