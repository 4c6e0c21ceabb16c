// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "squint/dsp.hpp"
#include "squint/error.hpp"
#include "squint/fft.hpp"

using namespace squint;
using dsp::cplx;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Config;
}

std::vector<int> all_indices(int order)
{
    std::vector<int> v(static_cast<std::size_t>(order));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

double energy(const std::vector<cplx>& x)
{
    double e = 0;
    for (auto v : x) e += std::norm(v);
    return e;
}

} // namespace

TEST_CASE("QAM mapping")
{
    const auto qpsk = dsp::qam_map(all_indices(4), 4);
    for (const auto& s : qpsk.samples) {
        CHECK(std::abs(std::abs(s.real()) - 1 / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(std::abs(s.imag()) - 1 / std::sqrt(2.0)) < 1e-15);
    }
    for (int order : {4, 16, 64}) {
        const auto idx = all_indices(order);
        const auto sig = dsp::qam_map(idx, order);
        CHECK(dsp::mean_power(sig.samples) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(dsp::qam_demap(sig, order) == idx);
    }
    // Gray property: horizontal neighbours differ in one bit.
    const auto sig16 = dsp::qam_map(all_indices(16), 16);
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            const double d = std::abs(sig16[a] - sig16[b]);
            if (d > 1e-9 && d < 2.0 / std::sqrt(10.0) + 1e-9) {
                CHECK(__builtin_popcount(static_cast<unsigned>(a ^ b)) == 1);
            }
        }
    }
    const std::vector<int> bad{0, 16};
    CHECK(code_of([&] { dsp::qam_map(bad, 16); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { dsp::qam_map(bad, 8); }) == ErrorCode::InvalidOrder);
    CHECK(code_of([&] { dsp::qam_demap(sig16, 32); }) == ErrorCode::InvalidOrder);

    // Zero input sits on every decision boundary: both axes take the upper level.
    const dsp::ComplexSignal zero{{cplx{}}, 1.0};
    const auto z = dsp::qam_demap(zero, 16);
    const auto back = dsp::qam_map(z, 16);
    CHECK(back[0].real() > 0);
    CHECK(back[0].imag() > 0);
}

TEST_CASE("QPSK at 20 dB SNR rarely errs")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(0, 3);
    std::vector<int> idx(200000);
    for (auto& v : idx) v = pick(rng);
    const auto tx = dsp::qam_map(idx, 4);
    const auto rx = dsp::awgn(tx, 20.0, 5);
    const auto dec = dsp::qam_demap(rx, 4);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) errors += dec[i] != idx[i];
    CHECK(static_cast<double>(errors) / idx.size() < 1e-3);
}

TEST_CASE("RRC taps")
{
    for (double beta : {0.25, 0.5, 1.0}) {
        const auto h = dsp::rrc_taps(beta, 16, 8);
        REQUIRE(h.size() == 16 * 8 + 1);
        double e = 0;
        for (double v : h) e += v * v;
        CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t k = 0; k < h.size(); ++k) {
            CHECK(h[k] == doctest::Approx(h[h.size() - 1 - k]).epsilon(1e-14));
            CHECK(std::isfinite(h[k]));
        }
        // Raised-cosine cascade is Nyquist: zero at nonzero symbol offsets.
        const int c = 16 * 8;
        double worst = 0;
        for (int off = 1; off <= 12; ++off) {
            double acc = 0;
            for (std::size_t j = 0; j < h.size(); ++j) {
                const long i = static_cast<long>(j) + off * 8;
                if (i < static_cast<long>(h.size())) acc += h[j] * h[static_cast<std::size_t>(i)];
            }
            worst = std::max(worst, std::abs(acc));
        }
        CHECK(worst < 1e-3);
        (void)c;
    }
    // beta = 0.25 puts a singular point at t = 1/(4 beta) = 1 symbol, tap index centre +- 8.
    const auto h = dsp::rrc_taps(0.25, 16, 8);
    CHECK(std::isfinite(h[64 + 8]));
    CHECK(h[64] > h[65]);
}

TEST_CASE("matched filter ISI below -40 dB")
{
    const auto h = dsp::rrc_taps(0.25, 16, 8);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> pick(0, 15);
    std::vector<int> idx(3000);
    for (auto& v : idx) v = pick(rng);
    const auto a = dsp::qam_map(idx, 16);
    std::vector<cplx> up(idx.size() * 8);
    for (std::size_t k = 0; k < idx.size(); ++k) up[k * 8] = a[k];
    const auto y = dsp::convolve(dsp::convolve(up, h), h);
    std::vector<cplx> rx(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) rx[k] = y[k * 8 + h.size() - 1];
    CHECK(dsp::measure_evm(rx, a.samples, dsp::EvmFit::None).evm_db < -40.0);
}

TEST_CASE("convolve matches the definition")
{
    const auto x = oracle::random_vector(37, 1);
    const std::vector<double> t{0.5, -1.0, 0.25, 2.0};
    const auto y = dsp::convolve(x, t);
    REQUIRE(y.size() == x.size() + t.size() - 1);
    for (std::size_t n = 0; n < y.size(); ++n) {
        cplx acc{};
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (n >= k && n - k < x.size()) acc += t[k] * x[n - k];
        }
        CHECK(std::abs(acc - y[n]) < 1e-14);
    }
}

TEST_CASE("FFT against the naive DFT")
{
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 12u, 64u, 97u, 100u, 256u, 1000u}) {
        const auto x = oracle::random_vector(n, n);
        const auto want = oracle::naive_dft(x);
        const auto got = dsp::dft(x);
        double scale = 0;
        for (auto v : want) scale = std::max(scale, std::abs(v));
        CHECK(oracle::max_abs_diff(got, want) / scale < 1e-12);
        CHECK(oracle::max_abs_diff(dsp::idft(got), x) < 1e-10);
    }
}

TEST_CASE("FFT properties")
{
    // impulse -> flat, bin-k exponential -> delta at k
    std::vector<cplx> imp(16);
    imp[0] = 1;
    for (auto v : dsp::dft(imp)) CHECK(std::abs(v - cplx{1, 0}) < 1e-15);
    const std::size_t l = 48;
    std::vector<cplx> tone(l);
    for (std::size_t i = 0; i < l; ++i) tone[i] = std::polar(1.0, 2 * oracle::pi * 5 * i / l);
    const auto spec = dsp::dft(tone);
    for (std::size_t k = 0; k < l; ++k) {
        CHECK(std::abs(spec[k] - (k == 5 ? cplx(l, 0) : cplx{})) < 1e-11);
    }
    // Parseval, linearity and round trip up to 2^16.
    for (std::size_t n : {1000u, 4096u, 65536u, 12345u}) {
        const auto x = oracle::random_vector(n, 99 + n);
        const auto y = oracle::random_vector(n, 7 + n);
        const auto fx = dsp::dft(x);
        CHECK(energy(fx) / n == doctest::Approx(energy(x)).epsilon(1e-10));
        CHECK(oracle::max_abs_diff(dsp::idft(fx), x) < 1e-10);
        std::vector<cplx> mix(n);
        for (std::size_t i = 0; i < n; ++i) mix[i] = 2.0 * x[i] - cplx{0, 3} * y[i];
        const auto fy = dsp::dft(y);
        const auto fm = dsp::dft(mix);
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(fm[i] - (2.0 * fx[i] - cplx{0, 3} * fy[i])));
        CHECK(err < 1e-8);
    }
    CHECK(dsp::is_pow2(1024));
    CHECK_FALSE(dsp::is_pow2(1000));
    CHECK(dsp::next_pow2(1000) == 1024);
    CHECK(dsp::next_pow2(1024) == 1024);
}

TEST_CASE("fractional delay")
{
    const std::size_t l = 256;
    const dsp::ComplexSignal x{oracle::random_vector(l, 4), 8};
    CHECK(oracle::max_abs_diff(dsp::fractional_delay(x, 0.0).samples, x.samples) < 1e-12);

    dsp::ComplexSignal imp{std::vector<cplx>(l), 1};
    imp[0] = 1;
    const auto shifted = dsp::fractional_delay(imp, 3.0);
    for (std::size_t i = 0; i < l; ++i) CHECK(shifted[i] == (i == 3 ? cplx{1, 0} : cplx{}));
    const auto back = dsp::fractional_delay(imp, -2.0);
    CHECK(back[l - 2] == cplx{1, 0});

    // Half-sample delay of a bin-k exponential is a pure phase factor.
    for (long k : {1L, 7L, -20L, 100L}) {
        dsp::ComplexSignal e{std::vector<cplx>(l), 1};
        for (std::size_t n = 0; n < l; ++n) e[n] = std::polar(1.0, 2 * oracle::pi * k * static_cast<double>(n) / l);
        const auto d = dsp::fractional_delay(e, 0.5);
        const cplx factor = std::polar(1.0, -oracle::pi * k / static_cast<double>(l));
        double err = 0;
        for (std::size_t n = 0; n < l; ++n) err = std::max(err, std::abs(d[n] - e[n] * factor));
        CHECK(err < 1e-12);
    }

    // Composition and energy.
    for (auto [a, b] : {std::pair{0.3, 1.45}, {-2.7, 0.9}, {10.25, -3.5}}) {
        const auto ab = dsp::fractional_delay(dsp::fractional_delay(x, a), b);
        const auto direct = dsp::fractional_delay(x, a + b);
        CHECK(oracle::max_abs_diff(ab.samples, direct.samples) < 1e-9);
        CHECK(energy(dsp::fractional_delay(x, a).samples) == doctest::Approx(energy(x.samples)).epsilon(1e-12));
    }
    CHECK(code_of([&] { dsp::fractional_delay(x, 64.0); }) == ErrorCode::DelayTooLarge);
    CHECK_NOTHROW(dsp::fractional_delay(x, 63.9));
}

TEST_CASE("AWGN")
{
    const dsp::ComplexSignal x{std::vector<cplx>(1000000, cplx{0.6, -0.8}), 1};
    const auto y = dsp::awgn(x, 13.0, 21);
    std::vector<cplx> noise(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) noise[i] = y[i] - x[i];
    const double snr = 10 * std::log10(dsp::mean_power(x.samples) / dsp::mean_power(noise));
    CHECK(std::abs(snr - 13.0) < 0.1);

    CHECK(dsp::awgn(x, INFINITY, 21).samples == x.samples);
    const dsp::ComplexSignal small{oracle::random_vector(500, 3), 1};
    CHECK(dsp::awgn(small, 5.0, 77).samples == dsp::awgn(small, 5.0, 77).samples);
    CHECK(dsp::awgn(small, 5.0, 77).samples != dsp::awgn(small, 5.0, 78).samples);
    const dsp::ComplexSignal zero{std::vector<cplx>(10), 1};
    CHECK(code_of([&] { dsp::awgn(zero, 10.0, 1); }) == ErrorCode::ZeroSignal);

    // Estimator spread shrinks like 1/sqrt(samples).
    const auto spread = [&](std::size_t n) {
        std::vector<double> est;
        for (std::uint64_t s = 0; s < 40; ++s) {
            const dsp::ComplexSignal part{std::vector<cplx>(n, cplx{1, 0}), 1};
            const auto r = dsp::awgn(part, 10.0, 1000 + s);
            std::vector<cplx> e(n);
            for (std::size_t i = 0; i < n; ++i) e[i] = r[i] - part[i];
            est.push_back(10 * std::log10(1.0 / dsp::mean_power(e)));
        }
        double m = 0, v = 0;
        for (double d : est) m += d;
        m /= est.size();
        for (double d : est) v += (d - m) * (d - m);
        return std::sqrt(v / est.size());
    };
    const double ratio = spread(1000) / spread(16000);
    CHECK(ratio > 2.5);
    CHECK(ratio < 6.5);
}

TEST_CASE("EVM measurement")
{
    const dsp::ComplexSignal ref{oracle::random_vector(20000, 8), 1};
    auto r = dsp::measure_evm(ref, ref);
    CHECK(r.evm_db == dsp::kEvmFloorDb);
    CHECK(r.mer_db == -r.evm_db);

    dsp::ComplexSignal twice = ref;
    for (auto& v : twice.samples) v *= 2.0;
    CHECK(dsp::measure_evm(twice, ref).evm_db == dsp::kEvmFloorDb);
    CHECK(dsp::measure_evm(twice, ref, dsp::EvmFit::None).evm_db == doctest::Approx(0.0).epsilon(1e-9));

    // e with 1% of the reference power -> -20 dB
    const auto e = oracle::random_vector(20000, 9);
    const double scale = std::sqrt(0.01 * dsp::mean_power(ref.samples) / dsp::mean_power(e));
    dsp::ComplexSignal noisy = ref;
    for (std::size_t i = 0; i < e.size(); ++i) noisy[i] += scale * e[i];
    const auto rep = dsp::measure_evm(noisy, ref, dsp::EvmFit::None, true);
    CHECK(std::abs(rep.evm_db + 20.0) < 0.1);
    REQUIRE(rep.per_symbol_errors);
    CHECK(rep.per_symbol_errors->size() == ref.size());
    CHECK(std::abs(dsp::measure_evm(noisy, ref).evm_db + 20.0) < 0.1);

    // invariance under any nonzero complex gain
    const double base = dsp::measure_evm(noisy, ref).evm_db;
    for (cplx c : {cplx{0.01, 0}, cplx{-3, 4}, cplx{0, 1e3}}) {
        dsp::ComplexSignal s = noisy;
        for (auto& v : s.samples) v *= c;
        CHECK(dsp::measure_evm(s, ref).evm_db == doctest::Approx(base).epsilon(1e-9));
    }

    const dsp::ComplexSignal shorter{std::vector<cplx>(5, 1.0), 1};
    CHECK(code_of([&] { dsp::measure_evm(shorter, ref); }) == ErrorCode::LengthMismatch);
    const dsp::ComplexSignal zeros{std::vector<cplx>(5), 1};
    CHECK(code_of([&] { dsp::measure_evm(shorter, zeros); }) == ErrorCode::ZeroReference);
    // rx all zero: nothing to fit, error equals the reference
    CHECK(dsp::measure_evm(zeros, shorter).evm_db == doctest::Approx(0.0));
}

TEST_CASE("signal spec validation")
{
    dsp::SignalSpec s;
    CHECK_NOTHROW(s.validate());
    CHECK(s.samples_per_cycle() == doctest::Approx(1.6));
    s.fractional_bandwidth = 0;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    s = {};
    s.oversample = 2;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    s = {};
    s.rrc_span = 15;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    s = {};
    s.modulation_order = 32;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidOrder);
}
