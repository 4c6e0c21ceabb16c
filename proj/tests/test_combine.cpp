// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "squint/combine.hpp"
#include "squint/error.hpp"
#include "squint/txrx.hpp"

using namespace squint;
using analytic::ArrayConfig;
using analytic::deg_to_rad;
using dsp::cplx;

namespace {

ArrayConfig arr(int n, double theta_deg)
{
    return ArrayConfig{n, 0.5, deg_to_rad(theta_deg)};
}

txrx::OfdmSpec ofdm_of(int m, int symbols = 4)
{
    txrx::OfdmSpec o;
    o.m_carriers = m;
    o.n_ofdm_symbols = symbols;
    return o;
}

// Phase-aligned element streams of a pure tone at tone index m, built by hand:
// element n sees the tone delayed by n * dtau samples.
wavefront::ElementStreams tone_streams(const ArrayConfig& c, double bw, const txrx::OfdmSpec& o, int m,
                                       std::size_t len)
{
    const double spc = bw * o.oversample;
    const double delay = c.delay_step_cycles() * spc;
    const double f = static_cast<double>(m - o.m0()) / static_cast<double>(o.fft_size());
    wavefront::ElementStreams s;
    s.array = c;
    s.delay_step_samples = delay;
    for (int n = 0; n < c.n_elements; ++n) {
        std::vector<cplx> x(len);
        for (std::size_t k = 0; k < len; ++k) {
            x[k] = std::polar(1.0, 2 * oracle::pi * f * (static_cast<double>(k) - n * delay));
        }
        s.streams.push_back(std::move(x));
    }
    return s;
}

} // namespace

TEST_CASE("combiner names")
{
    CHECK(combine::parse_kind("ps") == combine::CombinerKind::PhaseShifterSum);
    CHECK(combine::parse_kind("idft") == combine::CombinerKind::FullIdft);
    CHECK(combine::parse_kind("reduced") == combine::CombinerKind::ReducedIdft);
    CHECK(combine::to_string(combine::CombinerKind::ReducedIdft) == "reduced");
    CHECK_THROWS_AS(combine::parse_kind("dft"), Error);
}

TEST_CASE("full IDFT weights")
{
    const auto c = arr(16, 30);
    const auto o = ofdm_of(32);
    const auto w = combine::full_idft_weights(c, 0.2, o);
    REQUIRE(w.rows == 32);
    REQUIRE(w.cols == 16);
    for (std::size_t m = 0; m < w.rows; ++m) {
        for (std::size_t n = 0; n < w.cols; ++n) {
            CHECK(std::abs(w.at(m, n)) == doctest::Approx(1.0).epsilon(1e-15));
            const double want = 2 * oracle::pi * n * 0.5 * 0.5 * (0.2 / 32) * (static_cast<double>(m) - 16);
            CHECK(w.phase[m * 16 + n] == doctest::Approx(want).epsilon(1e-13));
        }
    }
    for (std::size_t n = 0; n < 16; ++n) CHECK(w.phase[16 * 16 + n] == 0.0);
}

TEST_CASE("full IDFT centre stream equals the phase-shifter sum")
{
    const auto c = arr(8, 40);
    const auto o = ofdm_of(16);
    const auto s = tone_streams(c, 0.2, o, 3, 512);
    const auto outs = combine::full_idft_combine(s, 0.2, o);
    REQUIRE(outs.size() == 16);
    CHECK(outs[static_cast<std::size_t>(o.m0())].samples == combine::phase_sum(s).samples);
}

TEST_CASE("every tone combines coherently through its IDFT output")
{
    for (int n_el : {2, 5, 8, 16}) {
        for (int m_car : {4, 16, 32}) {
            const auto c = arr(n_el, 35);
            const auto o = ofdm_of(m_car);
            const double bw = 0.2;
            for (int m = 0; m < m_car; ++m) {
                const auto s = tone_streams(c, bw, o, m, 2 * o.fft_size());
                const double f = static_cast<double>(m - o.m0()) / static_cast<double>(o.fft_size());
                const auto outs = combine::full_idft_combine(s, bw, o, Exec::Serial);
                const double full = std::abs(oracle::tone_amplitude(outs[static_cast<std::size_t>(m)].samples, f, 0, o.fft_size()));
                CHECK(std::abs(full - 1.0) < 1e-6);
                const double ps = std::abs(oracle::tone_amplitude(combine::phase_sum(s).samples, f, 0, o.fft_size()));
                const double df = static_cast<double>(m - o.m0()) * bw / m_car;
                CHECK(ps == doctest::Approx(analytic::space_factor_at_steer(c, 1 + df)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("reduced IDFT degenerate sizes")
{
    const auto c = arr(8, 30);
    const auto o = ofdm_of(16);
    const auto s = tone_streams(c, 0.2, o, 11, 256);

    const auto one = combine::reduced_idft_combine(s, 0.2, o, 8, 16);
    REQUIRE(one.outputs.size() == 1);
    CHECK(oracle::max_abs_diff(one.outputs[0].samples, combine::phase_sum(s).samples) < 1e-15);

    const auto fine = combine::reduced_idft_combine(s, 0.2, o, 1, 1);
    const auto full = combine::full_idft_combine(s, 0.2, o);
    REQUIRE(fine.outputs.size() == full.size());
    for (std::size_t m = 0; m < full.size(); ++m) {
        CHECK(oracle::max_abs_diff(fine.outputs[m].samples, full[m].samples) < 1e-12);
    }

    const auto mid = combine::reduced_idft_combine(s, 0.2, o, 2, 4);
    CHECK(mid.outputs.size() == 4);
    CHECK(mid.output_for_tone(0) == 0);
    CHECK(mid.output_for_tone(7) == 1);
    CHECK(mid.output_for_tone(15) == 3);

    CHECK_THROWS_AS(combine::reduced_idft_combine(s, 0.2, o, 3, 4), Error);
    try {
        combine::reduced_idft_combine(s, 0.2, o, 2, 5);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IndivisibleSizing);
    }
}

TEST_CASE("reduced IDFT weights use the group centre and sub-array stride")
{
    const auto c = arr(16, 30);
    const auto o = ofdm_of(32);
    const auto w = combine::reduced_idft_weights(c, 0.2, o, 4, 8);
    REQUIRE(w.rows == 4);
    REQUIRE(w.cols == 4);
    for (std::size_t g = 0; g < 4; ++g) {
        for (std::size_t r = 0; r < 4; ++r) {
            const double centre = g * 8 + 3.5 - 16;
            const double want = 2 * oracle::pi * (r * 4.0) * 0.25 * (0.2 / 32) * centre;
            CHECK(w.phase[g * 4 + r] == doctest::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("auto-sized reduced IDFT keeps sub-array and group losses within 3 dB")
{
    // Two losses per tone: the N_o elements inside a sub-array see the whole
    // tone offset, and the full array sees the offset from its group centre.
    // Each is held near 1/sqrt(2) by the sizing; their product can go lower.
    const double floor = (1.0 / std::sqrt(2.0)) * 0.9;
    for (auto [n, m, bw, th] : {std::tuple{64, 128, 0.2, 30.0}, {32, 64, 0.2, 45.0}, {16, 256, 0.3, 60.0}, {64, 128, 0.4, 90.0}}) {
        const auto c = arr(n, th);
        const auto o = ofdm_of(m);
        const auto [n_sub, m_group] = combine::resolve_reduced({combine::CombinerKind::ReducedIdft, {}, {}}, c, bw, o);
        const auto w = combine::reduced_idft_weights(c, bw, o, static_cast<std::size_t>(n_sub), static_cast<std::size_t>(m_group));
        const double step = 2 * oracle::pi * c.delay_step_cycles() * bw / m;
        double worst_sub = 1.0;
        double worst_group = 1.0;
        for (int t = 0; t < m; ++t) {
            cplx sub{};
            for (int e = 0; e < n_sub; ++e) sub += std::polar(1.0, -step * e * (t - o.m0()));
            worst_sub = std::min(worst_sub, std::abs(sub) / n_sub);

            // Group residual: array phase slope left after the row weights.
            const std::size_t g = static_cast<std::size_t>(t / m_group);
            const double centre = w.cols > 1 ? w.phase[g * w.cols + 1] / (step * n_sub) : 0.0;
            cplx grp{};
            for (int e = 0; e < n; ++e) grp += std::polar(1.0, -step * e * (t - o.m0() - centre));
            worst_group = std::min(worst_group, std::abs(grp) / n);
        }
        CHECK(worst_sub >= floor);
        CHECK(worst_group >= floor);
    }
}

TEST_CASE("combiners are linear with equal noise gain per output")
{
    const auto c = arr(8, 30);
    const auto o = ofdm_of(16);
    auto a = tone_streams(c, 0.2, o, 2, 300);
    auto b = tone_streams(c, 0.2, o, 9, 300);
    auto mix = a;
    for (std::size_t n = 0; n < 8; ++n)
        for (std::size_t i = 0; i < 300; ++i) mix.streams[n][i] = 2.0 * a.streams[n][i] + cplx{0, -1} * b.streams[n][i];
    const auto ya = combine::full_idft_combine(a, 0.2, o);
    const auto yb = combine::full_idft_combine(b, 0.2, o);
    const auto ym = combine::full_idft_combine(mix, 0.2, o);
    for (std::size_t m = 0; m < 16; ++m)
        for (std::size_t i = 0; i < 300; ++i) CHECK(std::abs(ym[m][i] - (2.0 * ya[m][i] + cplx{0, -1} * yb[m][i])) < 1e-12);

    for (auto kind : {combine::CombinerKind::PhaseShifterSum, combine::CombinerKind::FullIdft, combine::CombinerKind::ReducedIdft}) {
        const auto w = combine::tone_weights({kind, 2, 4}, c, 0.2, o);
        for (std::size_t m = 0; m < 16; ++m) {
            double g = 0;
            for (std::size_t n = 0; n < 8; ++n) g += std::norm(w[m * 8 + n]);
            CHECK(g == doctest::Approx(8.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("weights CSV")
{
    const auto w = combine::full_idft_weights(arr(3, 30), 0.2, ofdm_of(4));
    std::ostringstream os;
    combine::write_weights_csv(os, w);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "output,e0,e1,e2");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 3);
        ++rows;
    }
    CHECK(rows == 4);
}

TEST_CASE("frequency-domain combining matches the time-domain combiners")
{
    const auto c = arr(8, 30);
    txrx::OfdmSpec o = ofdm_of(16, 6);
    const double bw = 0.2;
    const auto grid = txrx::random_grid(o, 16, 5);
    const auto payload = txrx::ofdm_modulate(grid, o);
    const std::size_t guard = 64;
    std::vector<cplx> framed(payload.size() + 2 * guard);
    std::copy(payload.samples.begin(), payload.samples.end(), framed.begin() + guard);
    const auto aligned = wavefront::phase_align(wavefront::propagate({framed, 1}, c, bw * o.oversample));
    const double advance = 7 * aligned.delay_step_samples / 2;
    const auto grids = txrx::element_grids(aligned, o, guard);

    for (auto kind : {combine::CombinerKind::PhaseShifterSum, combine::CombinerKind::FullIdft, combine::CombinerKind::ReducedIdft}) {
        const combine::CombinerSpec spec{kind, 2, 4};
        const auto w = combine::tone_weights(spec, c, bw, o);
        const auto freq = kernels::combine_tones(grids, w, 6, 16, 1.0 / 8, Exec::Serial);
        std::vector<dsp::ComplexSignal> outs;
        if (kind == combine::CombinerKind::PhaseShifterSum) {
            outs.assign(16, combine::phase_sum(aligned));
        } else if (kind == combine::CombinerKind::FullIdft) {
            outs = combine::full_idft_combine(aligned, bw, o);
        } else {
            const auto red = combine::reduced_idft_combine(aligned, bw, o, 2, 4);
            for (int m = 0; m < 16; ++m) outs.push_back(red.outputs[red.output_for_tone(m)]);
        }
        double err = 0;
        for (std::size_t m = 0; m < 16; ++m) {
            const auto g = txrx::demodulate_stream(outs[m], advance, o, guard);
            for (std::size_t s = 0; s < 6; ++s) err = std::max(err, std::abs(g.at(s, m) - freq[s * 16 + m]));
        }
        CHECK(err < 1e-10);
    }
}
