// SPDX-License-Identifier: Apache-2.0
#include "squint/fft.hpp"

#include <cassert>
#include <numbers>
#include <stdexcept>

namespace squint::dsp {

bool is_pow2(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) noexcept
{
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

Fft::Fft(std::size_t n) : n_(n), pow2_(is_pow2(n) || n == 0)
{
    constexpr double pi = std::numbers::pi;
    if (n_ <= 1) {
        return;
    }
    if (pow2_) {
        twiddle_.resize(n_ / 2);
        for (std::size_t k = 0; k < n_ / 2; ++k) {
            twiddle_[k] = std::polar(1.0, -2.0 * pi * static_cast<double>(k) / static_cast<double>(n_));
        }
        bitrev_.resize(n_);
        int bits = 0;
        while ((std::size_t{1} << bits) < n_) {
            ++bits;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t r = 0;
            for (int b = 0; b < bits; ++b) {
                r |= ((i >> b) & 1u) << (bits - 1 - b);
            }
            bitrev_[i] = r;
        }
        return;
    }

    // chirp[k] = exp(-j pi k^2 / n); k^2 is reduced mod 2n to keep the argument small.
    chirp_.resize(n_);
    const std::size_t two_n = 2 * n_;
    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t k2 = (k * k) % two_n;
        chirp_[k] = std::polar(1.0, -pi * static_cast<double>(k2) / static_cast<double>(n_));
    }
    const std::size_t m = next_pow2(2 * n_ - 1);
    padded_ = std::make_unique<Fft>(m);
    chirp_spectrum_.assign(m, cplx{});
    chirp_spectrum_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n_; ++k) {
        chirp_spectrum_[k] = std::conj(chirp_[k]);
        chirp_spectrum_[m - k] = std::conj(chirp_[k]);
    }
    padded_->forward(chirp_spectrum_);
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

void Fft::forward(std::span<cplx> data) const
{
    if (data.size() != n_) {
        throw std::invalid_argument("Fft: length mismatch");
    }
    if (n_ <= 1) {
        return;
    }
    if (pow2_) {
        radix2(data);
    } else {
        bluestein(data);
    }
}

void Fft::inverse(std::span<cplx> data) const
{
    for (auto& v : data) {
        v = std::conj(v);
    }
    forward(data);
    const double scale = n_ == 0 ? 1.0 : 1.0 / static_cast<double>(n_);
    for (auto& v : data) {
        v = std::conj(v) * scale;
    }
}

void Fft::radix2(std::span<cplx> a) const
{
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t step = n_ / len;
        for (std::size_t i = 0; i < n_; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const cplx w = twiddle_[j * step];
                const cplx u = a[i + j];
                const cplx v = a[i + j + half] * w;
                a[i + j] = u + v;
                a[i + j + half] = u - v;
            }
        }
    }
}

void Fft::bluestein(std::span<cplx> data) const
{
    const std::size_t m = padded_->size();
    std::vector<cplx> work(m, cplx{});
    for (std::size_t k = 0; k < n_; ++k) {
        work[k] = data[k] * chirp_[k];
    }
    padded_->forward(work);
    for (std::size_t k = 0; k < m; ++k) {
        work[k] *= chirp_spectrum_[k];
    }
    padded_->inverse(work);
    for (std::size_t k = 0; k < n_; ++k) {
        data[k] = work[k] * chirp_[k];
    }
}

std::vector<cplx> dft(std::span<const cplx> signal)
{
    std::vector<cplx> out(signal.begin(), signal.end());
    Fft(out.size()).forward(out);
    return out;
}

std::vector<cplx> idft(std::span<const cplx> spectrum)
{
    std::vector<cplx> out(spectrum.begin(), spectrum.end());
    Fft(out.size()).inverse(out);
    return out;
}

} // namespace squint::dsp
